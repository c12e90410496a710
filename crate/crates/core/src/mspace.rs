//! Finite extended metric spaces, nonexpanding maps, and the monoidal
//! structure: supremum products, the addition-metric tensor, and hom-spaces.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dist::Dist;

/// A finite extended metric space: ordered point labels plus a full
/// distance table. Construction goes through [`validate_metric`] (or one of
/// the structural builders), so a value of this type always satisfies the
/// metric axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinMetric {
    points: Vec<String>,
    dist: Vec<Vec<Dist>>,
}

/// Raw candidate for a metric space, as parsed from files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricCandidate {
    pub points: Vec<String>,
    pub dist: Vec<Vec<Dist>>,
}

/// One violated metric axiom instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MetricViolation {
    /// `d(x,x) != 0`
    NonzeroDiagonal { point: String, value: Dist },
    /// `d(x,y) != d(y,x)`
    Asymmetry {
        x: String,
        y: String,
        xy: Dist,
        yx: Dist,
    },
    /// `d(x,y) = 0` with `x != y`
    Separation { x: String, y: String },
    /// `d(x,z) > d(x,y) + d(y,z)`
    Triangle {
        x: String,
        y: String,
        z: String,
        direct: Dist,
        via: Dist,
    },
    /// table is not square over the point list, or labels repeat
    Shape { detail: String },
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::NonzeroDiagonal { point, value } => {
                write!(f, "d({point},{point}) = {value}, expected 0")
            }
            MetricViolation::Asymmetry { x, y, xy, yx } => {
                write!(f, "d({x},{y}) = {xy} but d({y},{x}) = {yx}")
            }
            MetricViolation::Separation { x, y } => {
                write!(f, "distinct points {x}, {y} at distance 0")
            }
            MetricViolation::Triangle {
                x,
                y,
                z,
                direct,
                via,
            } => {
                write!(
                    f,
                    "d({x},{z}) = {direct} exceeds d({x},{y}) + d({y},{z}) = {via}"
                )
            }
            MetricViolation::Shape { detail } => write!(f, "malformed table: {detail}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("metric axioms violated: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct MetricViolations(pub Vec<MetricViolation>);

/// Check all metric axioms on a candidate table; return the space or every
/// violated axiom instance.
pub fn validate_metric(candidate: &MetricCandidate) -> Result<FinMetric, MetricViolations> {
    let n = candidate.points.len();
    let mut violations = Vec::new();

    {
        let mut seen = std::collections::BTreeSet::new();
        for p in &candidate.points {
            if !seen.insert(p) {
                violations.push(MetricViolation::Shape {
                    detail: format!("duplicate point {p}"),
                });
            }
        }
    }
    if candidate.dist.len() != n || candidate.dist.iter().any(|row| row.len() != n) {
        violations.push(MetricViolation::Shape {
            detail: format!("table is not {n}x{n}"),
        });
        return Err(MetricViolations(violations));
    }

    let d = |i: usize, j: usize| &candidate.dist[i][j];
    for i in 0..n {
        if !d(i, i).is_zero() {
            violations.push(MetricViolation::NonzeroDiagonal {
                point: candidate.points[i].clone(),
                value: d(i, i).clone(),
            });
        }
        for j in (i + 1)..n {
            if d(i, j) != d(j, i) {
                violations.push(MetricViolation::Asymmetry {
                    x: candidate.points[i].clone(),
                    y: candidate.points[j].clone(),
                    xy: d(i, j).clone(),
                    yx: d(j, i).clone(),
                });
            }
            if d(i, j).is_zero() {
                violations.push(MetricViolation::Separation {
                    x: candidate.points[i].clone(),
                    y: candidate.points[j].clone(),
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let via = d(i, j) + d(j, k);
                if *d(i, k) > via {
                    violations.push(MetricViolation::Triangle {
                        x: candidate.points[i].clone(),
                        y: candidate.points[j].clone(),
                        z: candidate.points[k].clone(),
                        direct: d(i, k).clone(),
                        via,
                    });
                }
            }
        }
    }

    if violations.is_empty() {
        Ok(FinMetric {
            points: candidate.points.clone(),
            dist: candidate.dist.clone(),
        })
    } else {
        Err(MetricViolations(violations))
    }
}

impl FinMetric {
    /// Internal constructor for tables known to satisfy the axioms.
    pub(crate) fn new_unchecked(points: Vec<String>, dist: Vec<Vec<Dist>>) -> FinMetric {
        debug_assert!(validate_metric(&MetricCandidate {
            points: points.clone(),
            dist: dist.clone()
        })
        .is_ok());
        FinMetric { points, dist }
    }

    pub fn candidate(&self) -> MetricCandidate {
        MetricCandidate {
            points: self.points.clone(),
            dist: self.dist.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn label(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }

    pub fn dist(&self, i: usize, j: usize) -> &Dist {
        &self.dist[i][j]
    }

    pub fn table(&self) -> &Vec<Vec<Dist>> {
        &self.dist
    }

    /// All distinct unordered pairs `(i, j, d)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &Dist)> {
        (0..self.len())
            .flat_map(move |i| ((i + 1)..self.len()).map(move |j| (i, j, self.dist(i, j))))
    }

    /// The space is discrete when all off-diagonal distances are infinite.
    pub fn is_discrete(&self) -> bool {
        self.pairs().all(|(_, _, d)| *d == Dist::Infinity)
    }
}

/// Discrete space on the given labels: distinct points at distance infinity.
pub fn discrete_space<I, S>(labels: I) -> FinMetric
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let points: Vec<String> = labels.into_iter().map(Into::into).collect();
    let n = points.len();
    let dist = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Dist::zero() } else { Dist::Infinity })
                .collect()
        })
        .collect();
    FinMetric::new_unchecked(points, dist)
}

fn tuple_label(parts: &[&str]) -> String {
    format!("({})", parts.join(","))
}

/// Cartesian product of carriers, enumerated with the last factor varying
/// fastest. Returns the tuples as index vectors.
fn product_tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut tuples = vec![vec![]];
    for &s in sizes {
        let mut next = Vec::with_capacity(tuples.len() * s);
        for t in &tuples {
            for v in 0..s {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        tuples = next;
    }
    tuples
}

/// Product with the supremum metric, together with the projection maps.
/// The empty product is the singleton (terminal) space.
pub fn sup_product(factors: &[&FinMetric]) -> (FinMetric, Vec<MetricMap>) {
    let sizes: Vec<usize> = factors.iter().map(|m| m.len()).collect();
    let tuples = product_tuples(&sizes);
    let points: Vec<String> = tuples
        .iter()
        .map(|t| {
            tuple_label(
                &t.iter()
                    .enumerate()
                    .map(|(k, &i)| factors[k].label(i))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let dist: Vec<Vec<Dist>> = tuples
        .iter()
        .map(|a| {
            tuples
                .iter()
                .map(|b| {
                    Dist::sup(
                        a.iter()
                            .zip(b.iter())
                            .enumerate()
                            .map(|(k, (&i, &j))| factors[k].dist(i, j).clone()),
                    )
                })
                .collect()
        })
        .collect();
    let product = FinMetric::new_unchecked(points, dist);
    let projections = (0..factors.len())
        .map(|k| {
            MetricMap::new_unchecked(
                product.clone(),
                factors[k].clone(),
                tuples.iter().map(|t| t[k]).collect(),
            )
        })
        .collect();
    (product, projections)
}

/// `n`-fold sup power of a space.
pub fn sup_power(space: &FinMetric, n: usize) -> (FinMetric, Vec<MetricMap>) {
    let factors = vec![space; n];
    sup_product(&factors)
}

/// Tensor product: cartesian product with the addition metric.
pub fn tensor(x: &FinMetric, y: &FinMetric) -> FinMetric {
    let tuples = product_tuples(&[x.len(), y.len()]);
    let points = tuples
        .iter()
        .map(|t| tuple_label(&[x.label(t[0]), y.label(t[1])]))
        .collect();
    let dist = tuples
        .iter()
        .map(|a| {
            tuples
                .iter()
                .map(|b| x.dist(a[0], b[0]) + y.dist(a[1], b[1]))
                .collect()
        })
        .collect();
    FinMetric::new_unchecked(points, dist)
}

/// A total map between finite metric spaces. Nonexpansiveness is a property
/// checked by [`check_nonexpanding`], not an invariant of the type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricMap {
    domain: FinMetric,
    codomain: FinMetric,
    table: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("map table has {got} entries for a domain of {expected} points")]
    WrongLength { expected: usize, got: usize },
    #[error("map sends point {index} outside the codomain")]
    OutOfRange { index: usize },
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
}

impl MetricMap {
    pub fn new(
        domain: FinMetric,
        codomain: FinMetric,
        table: Vec<usize>,
    ) -> Result<MetricMap, MapError> {
        if table.len() != domain.len() {
            return Err(MapError::WrongLength {
                expected: domain.len(),
                got: table.len(),
            });
        }
        if let Some(i) = table.iter().position(|&v| v >= codomain.len()) {
            return Err(MapError::OutOfRange { index: i });
        }
        Ok(MetricMap {
            domain,
            codomain,
            table,
        })
    }

    /// Build from `domain label -> codomain label` assignments.
    pub fn from_labels(
        domain: FinMetric,
        codomain: FinMetric,
        assign: &BTreeMap<String, String>,
    ) -> Result<MetricMap, MapError> {
        let table = domain
            .points()
            .iter()
            .map(|p| {
                let target = assign
                    .get(p)
                    .ok_or_else(|| MapError::UnknownPoint(p.clone()))?;
                codomain
                    .index_of(target)
                    .ok_or_else(|| MapError::UnknownPoint(target.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MetricMap {
            domain,
            codomain,
            table,
        })
    }

    pub(crate) fn new_unchecked(
        domain: FinMetric,
        codomain: FinMetric,
        table: Vec<usize>,
    ) -> MetricMap {
        debug_assert_eq!(table.len(), domain.len());
        debug_assert!(table.iter().all(|&v| v < codomain.len()));
        MetricMap {
            domain,
            codomain,
            table,
        }
    }

    pub fn identity(space: &FinMetric) -> MetricMap {
        MetricMap::new_unchecked(space.clone(), space.clone(), (0..space.len()).collect())
    }

    pub fn domain(&self) -> &FinMetric {
        &self.domain
    }

    pub fn codomain(&self) -> &FinMetric {
        &self.codomain
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `other` after `self` (diagrammatic order: self first).
    pub fn then(&self, other: &MetricMap) -> MetricMap {
        debug_assert_eq!(self.codomain, other.domain);
        MetricMap::new_unchecked(
            self.domain.clone(),
            other.codomain.clone(),
            self.table.iter().map(|&i| other.table[i]).collect(),
        )
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.len()];
        for &v in &self.table {
            hit[v] = true;
        }
        hit.into_iter().all(|b| b)
    }
}

/// Worst witness against nonexpansiveness: a pair whose image distance
/// exceeds its source distance by the largest (lexicographically compared)
/// margin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansionWitness {
    pub x: String,
    pub y: String,
    pub source_dist: Dist,
    pub image_dist: Dist,
}

/// `true` iff `d(f x, f y) <= d(x, y)` for all pairs; otherwise the witness
/// with the largest image distance (ties broken by smaller source distance,
/// then point order).
pub fn check_nonexpanding(f: &MetricMap) -> Result<(), ExpansionWitness> {
    let mut worst: Option<ExpansionWitness> = None;
    for (i, j, d_src) in f.domain().pairs() {
        let d_img = f.codomain().dist(f.apply(i), f.apply(j));
        if d_img > d_src {
            let cand = ExpansionWitness {
                x: f.domain().label(i).to_string(),
                y: f.domain().label(j).to_string(),
                source_dist: d_src.clone(),
                image_dist: d_img.clone(),
            };
            let beats = match &worst {
                None => true,
                Some(w) => {
                    (
                        cand.image_dist.clone(),
                        std::cmp::Reverse(cand.source_dist.clone()),
                    ) > (
                        w.image_dist.clone(),
                        std::cmp::Reverse(w.source_dist.clone()),
                    )
                }
            };
            if beats {
                worst = Some(cand);
            }
        }
    }
    match worst {
        None => Ok(()),
        Some(w) => Err(w),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("enumeration bound exceeded: {task} needs {needed} candidates, bound is {bound}")]
pub struct BoundExceeded {
    pub task: String,
    pub needed: u128,
    pub bound: u128,
}

/// The space of all nonexpanding maps `X -> Y` with the supremum metric.
///
/// Enumerates all `|Y|^|X|` candidate tables, so a bound guards the call.
pub fn hom_space(
    x: &FinMetric,
    y: &FinMetric,
    max_maps: u128,
) -> Result<(FinMetric, Vec<MetricMap>), BoundExceeded> {
    let count = (y.len() as u128)
        .checked_pow(x.len() as u32)
        .unwrap_or(u128::MAX);
    if count > max_maps {
        return Err(BoundExceeded {
            task: format!("hom({:?} pts, {:?} pts)", x.len(), y.len()),
            needed: count,
            bound: max_maps,
        });
    }
    let mut maps = Vec::new();
    for table in product_tuples(&vec![y.len(); x.len()]) {
        let f = MetricMap::new_unchecked(x.clone(), y.clone(), table);
        if check_nonexpanding(&f).is_ok() {
            maps.push(f);
        }
    }
    let points: Vec<String> = maps
        .iter()
        .map(|f| tuple_label(&f.table().iter().map(|&v| y.label(v)).collect::<Vec<_>>()))
        .collect();
    let dist = maps
        .iter()
        .map(|f| {
            maps.iter()
                .map(|g| Dist::sup((0..x.len()).map(|i| y.dist(f.apply(i), g.apply(i)).clone())))
                .collect()
        })
        .collect();
    Ok((FinMetric::new_unchecked(points, dist), maps))
}

/// Pair two maps into a sup product: `<f, g>(x) = (f x, g x)`.
pub fn pair_into_product(f: &MetricMap, g: &MetricMap, product: &FinMetric) -> MetricMap {
    debug_assert_eq!(f.domain(), g.domain());
    let table = (0..f.domain().len())
        .map(|i| {
            let label = tuple_label(&[
                f.codomain().label(f.apply(i)),
                g.codomain().label(g.apply(i)),
            ]);
            product
                .index_of(&label)
                .expect("pairing target must be a product point")
        })
        .collect();
    MetricMap::new_unchecked(f.domain().clone(), product.clone(), table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, m: i64) -> Dist {
        Dist::ratio(n, m).unwrap()
    }

    fn space(points: &[&str], finite: &[(&str, &str, Dist)]) -> FinMetric {
        let pts: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        let n = pts.len();
        let mut dist = vec![vec![Dist::Infinity; n]; n];
        for i in 0..n {
            dist[i][i] = Dist::zero();
        }
        for (a, b, d) in finite {
            let i = pts.iter().position(|p| p == a).unwrap();
            let j = pts.iter().position(|p| p == b).unwrap();
            dist[i][j] = d.clone();
            dist[j][i] = d.clone();
        }
        validate_metric(&MetricCandidate { points: pts, dist }).unwrap()
    }

    #[test]
    fn singleton_is_valid() {
        let m = validate_metric(&MetricCandidate {
            points: vec!["p".into()],
            dist: vec![vec![Dist::zero()]],
        })
        .unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn three_point_triangle_ok() {
        // d(p,q)=1, d(q,r)=2, d(p,r)=5/2: all 27 triangle instances hold.
        let m = space(
            &["p", "q", "r"],
            &[
                ("p", "q", q(1, 1)),
                ("q", "r", q(2, 1)),
                ("p", "r", q(5, 2)),
            ],
        );
        // independent triple-loop oracle
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!(*m.dist(i, k) <= m.dist(i, j) + m.dist(j, k));
                }
            }
        }
    }

    #[test]
    fn zero_distance_between_distinct_points_rejected() {
        let c = MetricCandidate {
            points: vec!["p".into(), "q".into()],
            dist: vec![
                vec![Dist::zero(), Dist::zero()],
                vec![Dist::zero(), Dist::zero()],
            ],
        };
        let errs = validate_metric(&c).unwrap_err();
        assert!(errs
            .0
            .iter()
            .any(|v| matches!(v, MetricViolation::Separation { x, y } if x == "p" && y == "q")));
    }

    #[test]
    fn discrete_space_distances() {
        let m = discrete_space(["a", "b"]);
        assert_eq!(*m.dist(0, 1), Dist::Infinity);
        assert!(m.is_discrete());
        let empty = discrete_space(Vec::<String>::new());
        assert!(empty.is_empty());
        let one = discrete_space(["a"]);
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn sup_product_takes_max() {
        let x = space(&["a", "b"], &[("a", "b", q(1, 1))]);
        let y = space(&["u", "v"], &[("u", "v", q(3, 1))]);
        let (p, projs) = sup_product(&[&x, &y]);
        let i = p.index_of("(a,u)").unwrap();
        let j = p.index_of("(b,v)").unwrap();
        assert_eq!(*p.dist(i, j), q(3, 1));
        for pr in &projs {
            assert!(check_nonexpanding(pr).is_ok());
        }
        // empty product is terminal
        let (term, _) = sup_product(&[]);
        assert_eq!(term.len(), 1);
        // square: d((a,a),(b,b)) = 1
        let (sq, _) = sup_product(&[&x, &x]);
        let i = sq.index_of("(a,a)").unwrap();
        let j = sq.index_of("(b,b)").unwrap();
        assert_eq!(*sq.dist(i, j), q(1, 1));
    }

    #[test]
    fn tensor_adds() {
        let x = space(&["a", "b"], &[("a", "b", q(1, 1))]);
        let y = space(&["u", "v"], &[("u", "v", q(3, 1))]);
        let t = tensor(&x, &y);
        let i = t.index_of("(a,u)").unwrap();
        let j = t.index_of("(b,v)").unwrap();
        assert_eq!(*t.dist(i, j), q(4, 1));
        // unit law: singleton tensor Y isometric to Y (same table up to labels)
        let one = discrete_space(["*"]);
        let ty = tensor(&one, &y);
        assert_eq!(ty.len(), y.len());
        for a in 0..y.len() {
            for b in 0..y.len() {
                assert_eq!(ty.dist(a, b), y.dist(a, b));
            }
        }
        // symmetry via swap is an isometry
        let xy = tensor(&x, &y);
        let yx = tensor(&y, &x);
        for a in 0..x.len() {
            for b in 0..y.len() {
                for a2 in 0..x.len() {
                    for b2 in 0..y.len() {
                        let i = xy
                            .index_of(&format!("({},{})", x.label(a), y.label(b)))
                            .unwrap();
                        let j = xy
                            .index_of(&format!("({},{})", x.label(a2), y.label(b2)))
                            .unwrap();
                        let i2 = yx
                            .index_of(&format!("({},{})", y.label(b), x.label(a)))
                            .unwrap();
                        let j2 = yx
                            .index_of(&format!("({},{})", y.label(b2), x.label(a2)))
                            .unwrap();
                        assert_eq!(xy.dist(i, j), yx.dist(i2, j2));
                    }
                }
            }
        }
    }

    #[test]
    fn nonexpanding_checks() {
        let x = space(&["a", "b"], &[("a", "b", q(1, 1))]);
        assert!(check_nonexpanding(&MetricMap::identity(&x)).is_ok());
        // constant map to a point
        let one = discrete_space(["*"]);
        let c = MetricMap::new(x.clone(), one, vec![0, 0]).unwrap();
        assert!(check_nonexpanding(&c).is_ok());
        // from a discrete space anything is nonexpanding
        let d2 = discrete_space(["a", "b"]);
        let any = MetricMap::new(d2, x.clone(), vec![1, 0]).unwrap();
        assert!(check_nonexpanding(&any).is_ok());
        // an expanding map is caught with the worst pair
        let y = space(&["u", "v"], &[("u", "v", q(3, 1))]);
        let f = MetricMap::new(x, y, vec![0, 1]).unwrap();
        let w = check_nonexpanding(&f).unwrap_err();
        assert_eq!(w.image_dist, q(3, 1));
        assert_eq!(w.source_dist, q(1, 1));
    }

    #[test]
    fn hom_space_cases() {
        let y = space(&["u", "v"], &[("u", "v", q(2, 1))]);
        // hom(singleton, Y) isometric to Y
        let one = discrete_space(["*"]);
        let (h, _) = hom_space(&one, &y, 1 << 20).unwrap();
        assert_eq!(h.len(), y.len());
        for a in 0..y.len() {
            for b in 0..y.len() {
                assert_eq!(h.dist(a, b), y.dist(a, b));
            }
        }
        // hom(discrete 2, Y) isometric to Y x Y
        let d2 = discrete_space(["a", "b"]);
        let (h2, _) = hom_space(&d2, &y, 1 << 20).unwrap();
        let (yy, _) = sup_product(&[&y, &y]);
        assert_eq!(h2.len(), yy.len());
        for a in 0..h2.len() {
            assert_eq!(h2.label(a), yy.label(a));
            for b in 0..h2.len() {
                assert_eq!(h2.dist(a, b), yy.dist(a, b));
            }
        }
        // X = {a,b} d=1 into Y = {u,v} d=2: the two swapping maps expand
        // 1 to 2, so only the constants survive; d(const_u, const_v) = 2.
        let x = space(&["a", "b"], &[("a", "b", q(1, 1))]);
        let (h3, maps) = hom_space(&x, &y, 1 << 20).unwrap();
        assert_eq!(maps.len(), 2);
        let cu = h3.index_of("(u,u)").unwrap();
        let cv = h3.index_of("(v,v)").unwrap();
        assert_eq!(*h3.dist(cu, cv), q(2, 1));
        // bound errors out
        assert!(hom_space(&x, &y, 3).is_err());
    }

    #[test]
    fn pairing_into_product_is_nonexpanding() {
        let x = space(&["a", "b"], &[("a", "b", q(1, 2))]);
        let y = space(&["u", "v"], &[("u", "v", q(2, 1))]);
        let z = space(&["s", "t"], &[("s", "t", q(1, 1))]);
        let (prod, _) = sup_product(&[&y, &z]);
        let (_, maps_to_y) = hom_space(&x, &y, 1 << 20).unwrap();
        let (_, maps_to_z) = hom_space(&x, &z, 1 << 20).unwrap();
        for f in &maps_to_y {
            for g in &maps_to_z {
                let paired = pair_into_product(f, g, &prod);
                assert!(check_nonexpanding(&paired).is_ok());
            }
        }
    }

    /// Closedness of the tensor as a counting bijection: maps X tensor Y -> Z
    /// correspond to maps X -> hom(Y, Z).
    #[test]
    fn tensor_hom_adjunction_counts() {
        let x = space(&["a", "b"], &[("a", "b", q(1, 2))]);
        let y = space(&["u", "v"], &[("u", "v", q(1, 1))]);
        let z = space(&["s", "t"], &[("s", "t", q(3, 2))]);
        let t = tensor(&x, &y);
        let (_, from_tensor) = hom_space(&t, &z, 1 << 24).unwrap();
        let (hyz, _) = hom_space(&y, &z, 1 << 24).unwrap();
        let (_, curried) = hom_space(&x, &hyz, 1 << 24).unwrap();
        assert_eq!(from_tensor.len(), curried.len());
    }
}
