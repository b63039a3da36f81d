//! Two independent deciders for odd `[1, b]`-factors.
//!
//! [`check_amahashi`] tests the subset condition `o(G - S) <= b|S|` over all
//! `S`, and [`find_odd_factor`] searches for the factor itself. For odd `b`
//! the two must agree; neither consults the other.

use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::graph::{Graph, GraphError, VertexSet};

pub const DEFAULT_MAX_VERTICES: usize = 22;
pub const DEFAULT_MAX_EDGES: usize = 64;
/// Hard limit from the bitmask representation.
const MASK_LIMIT: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("b must be a positive odd integer, got {0}")]
    InvalidB(usize),
    #[error("graph has {n} vertices, exhaustive subset search allows at most {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("graph has {m} edges, exact factor search allows at most {max}")]
    TooManyEdges { m: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check_b(b: usize) -> Result<(), FactorError> {
    if b % 2 == 1 {
        Ok(())
    } else {
        Err(FactorError::InvalidB(b))
    }
}

/// Spanning subgraph in which every vertex has odd degree in `[1, b]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorCertificate {
    pub edges: Vec<(usize, usize)>,
    pub degrees: Vec<usize>,
}

impl FactorCertificate {
    /// Builds a certificate on `n` vertices, deriving degrees from `edges`.
    pub fn from_edges(n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        let mut degrees = vec![0; n];
        for e in &mut edges {
            *e = (e.0.min(e.1), e.0.max(e.1));
            degrees[e.0] += 1;
            degrees[e.1] += 1;
        }
        edges.sort_unstable();
        Self { edges, degrees }
    }
}

/// A set `S` with `o(G - S) > b|S|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmahashiViolation {
    pub s: VertexSet,
    /// Odd components of `G - S`, in original labels.
    pub odd_components: Vec<VertexSet>,
    pub o: usize,
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AmahashiOutcome {
    Holds,
    Violated(AmahashiViolation),
}

impl AmahashiOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, AmahashiOutcome::Holds)
    }

    pub fn violation(&self) -> Option<&AmahashiViolation> {
        match self {
            AmahashiOutcome::Holds => None,
            AmahashiOutcome::Violated(v) => Some(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmahashiOptions {
    pub max_vertices: usize,
    pub execution: Execution,
}

impl Default for AmahashiOptions {
    fn default() -> Self {
        Self { max_vertices: DEFAULT_MAX_VERTICES, execution: Execution::default() }
    }
}

/// Number of odd components of the subgraph induced by `alive`.
fn odd_components_in(neighbors: &[u64], alive: u64) -> usize {
    let mut remaining = alive;
    let mut odd = 0;
    while remaining != 0 {
        let start = remaining & remaining.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = neighbors[v] & alive & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        remaining &= !comp;
        odd += (comp.count_ones() % 2) as usize;
    }
    odd
}

fn binomial_table(n: usize) -> Vec<Vec<u64>> {
    let mut c = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1] + if j < i { c[i - 1][j] } else { 0 };
        }
    }
    c
}

/// The `idx`-th `k`-subset of `0..n` in lexicographic order, as a bitmask.
fn unrank_combination(binom: &[Vec<u64>], n: usize, k: usize, mut idx: u64) -> u64 {
    let mut mask = 0u64;
    let mut next = 0;
    for slot in 0..k {
        let left = k - slot - 1;
        for c in next..n {
            let count = binom[n - c - 1][left];
            if idx < count {
                mask |= 1 << c;
                next = c + 1;
                break;
            }
            idx -= count;
        }
    }
    mask
}

/// Decides the Amahashi condition by enumerating every `S`.
///
/// Subsets are scanned by increasing size and, within one size, in
/// lexicographic order. The first violating set found is therefore a
/// smallest one, lexicographically first among those. Sizes `k` with
/// `n - k <= b k` are skipped because `o(G - S) <= n - |S|`.
pub fn check_amahashi(g: &Graph, b: usize, opts: AmahashiOptions) -> Result<AmahashiOutcome, FactorError> {
    check_b(b)?;
    let n = g.order();
    let max = opts.max_vertices.min(MASK_LIMIT);
    if n > max {
        return Err(FactorError::TooManyVertices { n, max });
    }
    let neighbors = g.neighbor_masks();
    let all = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let binom = binomial_table(n);

    for k in 0..=n {
        if n - k <= b * k {
            break;
        }
        let found = opts.execution.find_first(binom[n][k], |idx| {
            let s = unrank_combination(&binom, n, k, idx);
            let o = odd_components_in(&neighbors, all & !s);
            (o > b * k).then_some(s)
        });
        if let Some((_, s_mask)) = found {
            return Ok(AmahashiOutcome::Violated(describe_violation(g, VertexSet::from_mask(s_mask), b)));
        }
    }
    Ok(AmahashiOutcome::Holds)
}

fn describe_violation(g: &Graph, s: VertexSet, b: usize) -> AmahashiViolation {
    let (rest, relabel) = g.delete_vertices(&s).expect("s is within range");
    let odd_components: Vec<VertexSet> = rest.odd_components().iter().map(|c| relabel.lift(c)).collect();
    AmahashiViolation { o: odd_components.len(), bound: b * s.len(), s, odd_components }
}

/// Evaluates the condition for a single `S`, returning the violation if
/// `o(G - S) > b|S|`. Works for any graph size.
pub fn violation_for(g: &Graph, s: &VertexSet, b: usize) -> Result<Option<AmahashiViolation>, FactorError> {
    check_b(b)?;
    g.delete_vertices(s)?;
    let v = describe_violation(g, s.clone(), b);
    Ok((v.o > v.bound).then_some(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FinderOptions {
    pub max_edges: usize,
}

impl Default for FinderOptions {
    fn default() -> Self {
        Self { max_edges: DEFAULT_MAX_EDGES }
    }
}

/// Whether a vertex with current degree `cur` and `rem` undecided edges can
/// still finish with an odd degree in `[1, b]`.
fn can_finish(cur: usize, rem: usize, b: usize) -> bool {
    let lo = cur.max(1) | 1;
    lo <= (cur + rem).min(b)
}

struct Search {
    edges: Vec<(usize, usize)>,
    b: usize,
    cur: Vec<usize>,
    rem: Vec<usize>,
    chosen: Vec<bool>,
}

impl Search {
    fn run(&mut self, i: usize) -> bool {
        let Some(&(u, v)) = self.edges.get(i) else {
            return true;
        };
        self.rem[u] -= 1;
        self.rem[v] -= 1;
        for include in [true, false] {
            let d = usize::from(include);
            let (cu, cv) = (self.cur[u] + d, self.cur[v] + d);
            if can_finish(cu, self.rem[u], self.b) && can_finish(cv, self.rem[v], self.b) {
                self.cur[u] = cu;
                self.cur[v] = cv;
                self.chosen[i] = include;
                if self.run(i + 1) {
                    return true;
                }
                self.cur[u] -= d;
                self.cur[v] -= d;
            }
        }
        self.rem[u] += 1;
        self.rem[v] += 1;
        false
    }
}

/// Exact depth-first search for an odd `[1, b]`-factor.
///
/// Vertices are eliminated in order of nonincreasing degree (ties by index);
/// the edges of each vertex that are not yet scheduled are decided before
/// moving on. A branch is cut as soon as some endpoint can no longer reach
/// an odd degree in `[1, b]` with its remaining undecided edges.
pub fn find_odd_factor(g: &Graph, b: usize, opts: FinderOptions) -> Result<Option<FactorCertificate>, FactorError> {
    check_b(b)?;
    if g.size() > opts.max_edges {
        return Err(FactorError::TooManyEdges { m: g.size(), max: opts.max_edges });
    }
    let n = g.order();
    // the degree sum of a factor is even, so an odd count of odd degrees is impossible
    if n % 2 == 1 || (0..n).any(|v| g.degree(v) == 0) {
        return Ok(None);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut scheduled = vec![false; n];
    let mut edges = Vec::with_capacity(g.size());
    for &v in &order {
        scheduled[v] = true;
        edges.extend(g.neighbors(v).iter().filter(|&&w| !scheduled[w]).map(|&w| (v, w)));
    }

    let mut search = Search {
        chosen: vec![false; edges.len()],
        edges,
        b,
        cur: vec![0; n],
        rem: g.degrees(),
    };
    if !search.run(0) {
        return Ok(None);
    }
    let picked = search.edges.iter().zip(&search.chosen).filter(|(_, &c)| c).map(|(&e, _)| e).collect();
    Ok(Some(FactorCertificate::from_edges(n, picked)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum CertificateDefect {
    #[error("certificate covers {found} vertices, graph has {expected}")]
    WrongVertexCount { expected: usize, found: usize },
    #[error("edge {{{0}, {1}}} is not in the graph")]
    ForeignEdge(usize, usize),
    #[error("edge {{{0}, {1}}} listed twice")]
    RepeatedEdge(usize, usize),
    #[error("recorded degree of vertex {0} does not match the edges")]
    DegreeMismatch(usize),
    #[error("vertex {vertex} has even degree {degree}")]
    EvenDegree { vertex: usize, degree: usize },
    #[error("vertex {vertex} has degree {degree} above {b}")]
    DegreeAboveB { vertex: usize, degree: usize, b: usize },
}

/// Checks that `cert` is an odd `[1, b]`-factor of `g`.
pub fn verify_certificate(g: &Graph, b: usize, cert: &FactorCertificate) -> Result<(), CertificateDefect> {
    let n = g.order();
    if cert.degrees.len() != n {
        return Err(CertificateDefect::WrongVertexCount { expected: n, found: cert.degrees.len() });
    }
    let mut degrees = vec![0; n];
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in &cert.edges {
        if !g.has_edge(u, v) {
            return Err(CertificateDefect::ForeignEdge(u, v));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(CertificateDefect::RepeatedEdge(u, v));
        }
        degrees[u] += 1;
        degrees[v] += 1;
    }
    for (vertex, (&degree, &recorded)) in degrees.iter().zip(&cert.degrees).enumerate() {
        if degree != recorded {
            return Err(CertificateDefect::DegreeMismatch(vertex));
        }
        if degree % 2 == 0 {
            return Err(CertificateDefect::EvenDegree { vertex, degree });
        }
        if degree > b {
            return Err(CertificateDefect::DegreeAboveB { vertex, degree, b });
        }
    }
    Ok(())
}

/// Odd components `Q` of `G - S` with fewer than `ceil(r / b)` edges to `S`,
/// with their boundary sizes, in original labels and ordered by smallest
/// vertex.
pub fn small_boundary_components(
    g: &Graph,
    s: &VertexSet,
    r: usize,
    b: usize,
) -> Result<Vec<(VertexSet, usize)>, FactorError> {
    check_b(b)?;
    let limit = r.div_ceil(b);
    let (rest, relabel) = g.delete_vertices(s)?;
    Ok(rest
        .odd_components()
        .iter()
        .map(|c| relabel.lift(c))
        .map(|c| {
            let boundary = g.edge_boundary(&c, s).expect("component is disjoint from S");
            (c, boundary)
        })
        .filter(|&(_, boundary)| boundary < limit)
        .collect())
}

/// JSON shape shared by the `check` and `find-factor` commands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FactorReport {
    Factor {
        edges: Vec<(usize, usize)>,
    },
    Violation {
        #[serde(rename = "S")]
        s: VertexSet,
        o: usize,
        bound: usize,
    },
    /// The subset condition holds but no certificate was produced.
    Holds,
    /// No factor exists and no violating set was produced.
    None,
}

impl From<&FactorCertificate> for FactorReport {
    fn from(c: &FactorCertificate) -> Self {
        FactorReport::Factor { edges: c.edges.clone() }
    }
}

impl From<&AmahashiViolation> for FactorReport {
    fn from(v: &AmahashiViolation) -> Self {
        FactorReport::Violation { s: v.s.clone(), o: v.o, bound: v.bound }
    }
}
