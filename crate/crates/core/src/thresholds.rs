//! Closed-form eigenvalue thresholds for odd `[1, b]`-factors and the
//! extremal graphs `H(r, eta)` that attain them.
//!
//! For an `r`-regular graph with `r >= 3` and odd `b < r`, let
//! `c = ceil(r / b)`, `epsilon = 2` when `r` and `c` have the same parity
//! (else 1), `eta = c - epsilon`, and `x = r mod 2`. The threshold is
//!
//! ```text
//! rho(r, b) = (r - 2 - x + sqrt((r + 2 + x)^2 - 4 eta)) / 2
//! ```
//!
//! and `H(r, eta)` is an odd-order graph with `r + 1 + x` vertices, `eta`
//! vertices of degree `r - 1` and the rest of degree `r`, whose spectral
//! radius is exactly `rho(r, b)`.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::spectral::VertexPartition;

/// Agreement required between the two independent routes to `rho`.
pub const FORM_AGREEMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThresholdError {
    #[error("r must be at least 3, got {0}")]
    DegreeTooSmall(usize),
    #[error("b must be a positive odd integer, got {0}")]
    InvalidB(usize),
    #[error("b must be less than r, got b = {b}, r = {r}")]
    BNotBelowR { r: usize, b: usize },
    #[error("H(r, eta) is undefined for odd r = {r} with eta = {eta} < 3")]
    DegenerateConstruction { r: usize, eta: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityCase {
    EvenEven,
    EvenOdd,
    OddOdd,
    OddEven,
}

impl ParityCase {
    fn of(r: usize, ceil_rb: usize) -> Self {
        match (r % 2 == 0, ceil_rb % 2 == 0) {
            (true, true) => ParityCase::EvenEven,
            (true, false) => ParityCase::EvenOdd,
            (false, false) => ParityCase::OddOdd,
            (false, true) => ParityCase::OddEven,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ParityCase::EvenEven => "even-even",
            ParityCase::EvenOdd => "even-odd",
            ParityCase::OddOdd => "odd-odd",
            ParityCase::OddEven => "odd-even",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdParams {
    pub r: usize,
    pub b: usize,
    pub ceil_rb: usize,
    pub epsilon: usize,
    pub eta: usize,
    pub parity_case: ParityCase,
    pub rho: f64,
    pub x: usize,
}

impl ThresholdParams {
    pub fn r_is_odd(&self) -> bool {
        self.r % 2 == 1
    }

    /// Whether `H(r, eta)` exists as a simple graph.
    pub fn has_extremal_graph(&self) -> bool {
        !self.r_is_odd() || self.eta >= 3
    }

    /// `|V(H)| = r + 1 + x`.
    pub fn extremal_order(&self) -> usize {
        self.r + 1 + self.x
    }

    /// `2|E(H)| = r (r + 1 + x) - eta`.
    pub fn extremal_twice_edges(&self) -> usize {
        self.r * self.extremal_order() - self.eta
    }
}

fn validate(r: usize, b: usize) -> Result<(), ThresholdError> {
    if r < 3 {
        return Err(ThresholdError::DegreeTooSmall(r));
    }
    if b == 0 || b % 2 == 0 {
        return Err(ThresholdError::InvalidB(b));
    }
    if b >= r {
        return Err(ThresholdError::BNotBelowR { r, b });
    }
    Ok(())
}

pub fn threshold_params(r: usize, b: usize) -> Result<ThresholdParams, ThresholdError> {
    validate(r, b)?;
    let ceil_rb = r.div_ceil(b);
    let epsilon = if r % 2 == ceil_rb % 2 { 2 } else { 1 };
    let eta = ceil_rb - epsilon;
    let x = r % 2;
    debug_assert_eq!(eta % 2, r % 2);
    let mut p = ThresholdParams {
        r,
        b,
        ceil_rb,
        epsilon,
        eta,
        parity_case: ParityCase::of(r, ceil_rb),
        rho: f64::NAN,
        x,
    };
    p.rho = rho_threshold(&p);
    Ok(p)
}

/// Four-branch form, written directly in terms of `ceil(r/b)`.
fn rho_by_cases(r: f64, c: f64, case: ParityCase) -> f64 {
    match case {
        ParityCase::EvenEven => (r - 2.0 + ((r + 2.0).powi(2) - 4.0 * (c - 2.0)).sqrt()) / 2.0,
        ParityCase::EvenOdd => (r - 2.0 + ((r + 2.0).powi(2) - 4.0 * (c - 1.0)).sqrt()) / 2.0,
        ParityCase::OddOdd => (r - 3.0 + ((r + 3.0).powi(2) - 4.0 * (c - 2.0)).sqrt()) / 2.0,
        ParityCase::OddEven => (r - 3.0 + ((r + 3.0).powi(2) - 4.0 * (c - 1.0)).sqrt()) / 2.0,
    }
}

/// Single formula in terms of the parity offset `x` and `eta`.
fn rho_unified(r: f64, x: f64, eta: f64) -> f64 {
    let disc = (r + 2.0 + x).powi(2) - 4.0 * eta;
    assert!(disc >= 0.0, "negative discriminant for r = {r}, eta = {eta}");
    (r - 2.0 - x + disc.sqrt()) / 2.0
}

/// `rho(r, b)`, computed by both the four-branch and the unified formula.
///
/// Panics if the two disagree by more than [`FORM_AGREEMENT_TOL`], which
/// would mean `p` is inconsistent.
pub fn rho_threshold(p: &ThresholdParams) -> f64 {
    let by_cases = rho_by_cases(p.r as f64, p.ceil_rb as f64, p.parity_case);
    let unified = rho_unified(p.r as f64, p.x as f64, p.eta as f64);
    assert!(
        (by_cases - unified).abs() <= FORM_AGREEMENT_TOL,
        "rho forms disagree for r = {}, b = {}: {by_cases} vs {unified}",
        p.r,
        p.b
    );
    by_cases
}

/// The earlier four-case bound on `lambda_3` for odd `[1, b]`-factors.
pub fn lwy_threshold(r: usize, b: usize) -> Result<f64, ThresholdError> {
    validate(r, b)?;
    let c = r.div_ceil(b) as f64;
    let rf = r as f64;
    let value = match ParityCase::of(r, r.div_ceil(b)) {
        ParityCase::EvenEven => rf - (c - 2.0) / (rf + 1.0) + 1.0 / ((rf + 1.0) * (rf + 2.0)),
        ParityCase::EvenOdd => rf - (c - 1.0) / (rf + 1.0) + 1.0 / ((rf + 1.0) * (rf + 2.0)),
        ParityCase::OddEven => rf - (c - 1.0) / (rf + 1.0) + 1.0 / (rf + 2.0).powi(2),
        ParityCase::OddOdd => rf - (c - 2.0) / (rf + 1.0) + 1.0 / (rf + 2.0).powi(2),
    };
    Ok(value)
}

/// Earlier thresholds for perfect matchings (`b = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerfectMatchingBounds {
    pub bh: f64,
    pub cgh: f64,
}

/// Largest root of `x^3 - x^2 - 6x + 2`, by bisection on `[2, 3]`.
///
/// The other two roots lie in `(-3, 0)` and `(0, 1)`, and the cubic changes
/// sign on `[2, 3]`.
pub fn cgh_cubic_root() -> f64 {
    let f = |x: f64| ((x - 1.0) * x - 6.0) * x + 2.0;
    let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn prior_1factor_thresholds(r: usize) -> Result<PerfectMatchingBounds, ThresholdError> {
    if r < 3 {
        return Err(ThresholdError::DegreeTooSmall(r));
    }
    let rf = r as f64;
    let bh = if r % 2 == 0 { rf - 1.0 + 3.0 / (rf + 1.0) } else { rf - 1.0 + 3.0 / (rf + 2.0) };
    let cgh = if r == 3 {
        cgh_cubic_root()
    } else if r % 2 == 0 {
        0.5 * (rf - 2.0 + (rf * rf + 12.0).sqrt())
    } else {
        0.5 * (rf - 3.0 + ((rf + 1.0).powi(2) + 16.0).sqrt())
    };
    Ok(PerfectMatchingBounds { bh, cgh })
}

fn check_constructible(p: &ThresholdParams) -> Result<(), ThresholdError> {
    if p.has_extremal_graph() {
        Ok(())
    } else {
        Err(ThresholdError::DegenerateConstruction { r: p.r, eta: p.eta })
    }
}

/// `H(r, eta)`.
///
/// Even `r`: `K_{r+1-eta}` joined with `K_eta` minus a perfect matching.
/// Odd `r`: the complement of `C_eta` joined with `K_{r+2-eta}` minus a
/// perfect matching.
pub fn build_extremal(p: &ThresholdParams) -> Result<Graph, ThresholdError> {
    check_constructible(p)?;
    let (first, second) = extremal_block_sizes(p);
    let g = if p.r_is_odd() {
        let cycle = Graph::cycle(first).expect("eta >= 3 checked");
        cycle.complement().join(&Graph::matching_complement(second).expect("r + 2 - eta is even"))
    } else {
        Graph::complete(first).join(&Graph::matching_complement(second).expect("eta is even"))
    };
    debug_assert_eq!(g.order(), p.extremal_order());
    debug_assert_eq!(2 * g.size(), p.extremal_twice_edges());
    Ok(g)
}

fn extremal_block_sizes(p: &ThresholdParams) -> (usize, usize) {
    if p.r_is_odd() {
        (p.eta, p.r + 2 - p.eta)
    } else {
        (p.r + 1 - p.eta, p.eta)
    }
}

/// The two join factors of `H(r, eta)`, in construction order. When
/// `eta = 0` for even `r` the second factor is empty and the partition has
/// a single block.
pub fn extremal_partition(p: &ThresholdParams) -> Result<VertexPartition, ThresholdError> {
    check_constructible(p)?;
    let (first, second) = extremal_block_sizes(p);
    let mut blocks = vec![VertexSet::full(first)];
    if second > 0 {
        blocks.push(VertexSet::new((first..first + second).collect(), first + second).expect("in range"));
    }
    Ok(VertexPartition::new(first + second, blocks).expect("blocks cover 0..n"))
}

/// Mismatches between a graph and the vertex/edge/degree counts that an
/// extremal component must have.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub order: usize,
    pub expected_order: usize,
    pub twice_edges: usize,
    pub expected_twice_edges: usize,
    pub deficient_vertices: usize,
    pub max_degree: usize,
}

impl StructureReport {
    pub fn matches(&self, p: &ThresholdParams) -> bool {
        self.order == self.expected_order
            && self.twice_edges == self.expected_twice_edges
            && self.deficient_vertices == p.eta
            && self.max_degree <= p.r
    }
}

/// Counts `|V|`, `2|E|`, the number of degree-`(r-1)` vertices and the
/// maximum degree of `g`, alongside the values the extremal component needs.
pub fn structure_report(g: &Graph, p: &ThresholdParams) -> StructureReport {
    let degrees = g.degrees();
    StructureReport {
        order: g.order(),
        expected_order: p.extremal_order(),
        twice_edges: 2 * g.size(),
        expected_twice_edges: p.extremal_twice_edges(),
        deficient_vertices: degrees.iter().filter(|&&d| d + 1 == p.r).count(),
        max_degree: degrees.iter().copied().max().unwrap_or(0),
    }
}
