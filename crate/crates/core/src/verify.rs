//! Numerical checks of the threshold theorem and its ingredients.
//!
//! Every comparison against `rho(r, b)` uses [`GUARD`] on the conservative
//! side: a trial only counts as covered by the theorem when
//! `lambda_3 < rho - GUARD`.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::factor::{self, FactorCertificate, FactorError, FinderOptions};
use crate::graph::{Graph, GraphError};
use crate::io::serialize_edge_list;
use crate::spectral::{self, SpectralError};
use crate::thresholds::{self, StructureReport, ThresholdError, ThresholdParams};

/// Slack for every comparison between a computed eigenvalue and a threshold.
pub const GUARD: f64 = 1e-9;
pub const DEFAULT_RETRY_BUDGET: usize = 10_000;
/// Edge guard for the exact finder inside theorem checks; the campaign's
/// largest graphs (n = 20, r = 7) have 70 edges.
pub const THEOREM_CHECK_MAX_EDGES: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("n * r must be even, got n = {n}, r = {r}")]
    OddDegreeSum { n: usize, r: usize },
    #[error("degree {r} must be less than the order {n}")]
    DegreeTooLarge { n: usize, r: usize },
    #[error("no simple graph after {0} pairing attempts")]
    RetryExhausted(usize),
    #[error("graph is not regular")]
    NotRegular,
    #[error("graph has odd order {0}")]
    OddOrder(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("case-2 check needs odd r, got {0}")]
    EvenDegree(usize),
    #[error("H(r, eta) is undefined for r = {r}, b = {b} (eta = {eta}); rho = {rho}")]
    DegenerateConstruction { r: usize, b: usize, eta: usize, rho: f64 },
    #[error("invalid campaign configuration: {0}")]
    InvalidCampaign(String),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Random simple `r`-regular graph on `n` vertices from the pairing model.
///
/// Points are paired one pair at a time, uniformly among the pairs that
/// create neither a loop nor a repeated edge; if no such pair remains the
/// attempt is discarded and sampling restarts. Deterministic in `seed`.
pub fn random_regular(n: usize, r: usize, seed: u64) -> Result<Graph, VerifyError> {
    random_regular_with_budget(n, r, seed, DEFAULT_RETRY_BUDGET)
}

pub fn random_regular_with_budget(n: usize, r: usize, seed: u64, budget: usize) -> Result<Graph, VerifyError> {
    if n * r % 2 == 1 {
        return Err(VerifyError::OddDegreeSum { n, r });
    }
    if r >= n && r > 0 {
        return Err(VerifyError::DegreeTooLarge { n, r });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all_points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(r)).collect();

    'attempt: for _ in 0..budget {
        let mut free = all_points.clone();
        let mut adjacent = vec![false; n * n];
        let mut edges = Vec::with_capacity(n * r / 2);
        while !free.is_empty() {
            let ok = |i: usize, j: usize| {
                let (u, v) = (free[i], free[j]);
                i != j && u != v && !adjacent[u * n + v]
            };
            let mut pick = None;
            for _ in 0..32 {
                let (i, j) = (rng.gen_range(0..free.len()), rng.gen_range(0..free.len()));
                if ok(i, j) {
                    pick = Some((i, j));
                    break;
                }
            }
            if pick.is_none() {
                let candidates: Vec<(usize, usize)> =
                    (0..free.len()).flat_map(|i| (i + 1..free.len()).map(move |j| (i, j))).filter(|&(i, j)| ok(i, j)).collect();
                if candidates.is_empty() {
                    continue 'attempt;
                }
                pick = Some(candidates[rng.gen_range(0..candidates.len())]);
            }
            let (i, j) = pick.expect("pair chosen");
            let (u, v) = (free[i], free[j]);
            adjacent[u * n + v] = true;
            adjacent[v * n + u] = true;
            edges.push((u, v));
            free.swap_remove(i.max(j));
            free.swap_remove(i.min(j));
        }
        return Ok(Graph::from_edges(n, edges).expect("pairing avoids loops and repeats"));
    }
    Err(VerifyError::RetryExhausted(budget))
}

/// Outcome of testing one regular graph against the threshold theorem.
#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub r: usize,
    pub b: usize,
    pub n: usize,
    pub seed: Option<u64>,
    pub lambda3: f64,
    pub rho: f64,
    /// `lambda_3 < rho - GUARD`.
    pub implication_applicable: bool,
    /// `None` when the theorem is silent and the finder was not run.
    pub factor_found: Option<bool>,
    #[serde(skip)]
    pub certificate: Option<FactorCertificate>,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

impl TrialReport {
    pub fn is_counterexample(&self) -> bool {
        self.implication_applicable && self.factor_found != Some(true)
    }
}

/// Computes `lambda_3(G)` and `rho(r, b)`; when `lambda_3 < rho - GUARD`
/// runs the exact finder, which must then succeed.
///
/// `G` must be connected: two copies of `K_{r+1}` with `r` even have
/// `lambda_3 = -1` and no odd factor at all, since both components have odd
/// order.
pub fn theorem_check(g: &Graph, b: usize) -> Result<TrialReport, VerifyError> {
    let start = Instant::now();
    let r = g.regular_degree().ok_or(VerifyError::NotRegular)?;
    let n = g.order();
    if n % 2 == 1 {
        return Err(VerifyError::OddOrder(n));
    }
    if g.components().len() > 1 {
        return Err(VerifyError::Disconnected);
    }
    let params = thresholds::threshold_params(r, b)?;
    let lambda3 = spectral::lambda_k(g, 3)?;
    let applicable = lambda3 < params.rho - GUARD;
    let certificate = if applicable {
        factor::find_odd_factor(g, b, FinderOptions { max_edges: THEOREM_CHECK_MAX_EDGES })?
    } else {
        None
    };
    if let Some(cert) = &certificate {
        debug_assert!(factor::verify_certificate(g, b, cert).is_ok());
    }
    Ok(TrialReport {
        r,
        b,
        n,
        seed: None,
        lambda3,
        rho: params.rho,
        implication_applicable: applicable,
        factor_found: applicable.then_some(certificate.is_some()),
        certificate,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessReport {
    pub params: ThresholdParams,
    pub lambda1: f64,
    pub quotient_lambda1: f64,
    pub structure: StructureReport,
    pub equitable: bool,
    pub passed: bool,
}

/// Builds `H(r, eta)` and checks that its spectral radius, and the larger
/// eigenvalue of its two-block quotient matrix, both equal `rho(r, b)`, and
/// that its vertex, edge and degree counts are those of an extremal
/// component.
pub fn sharpness_check(r: usize, b: usize) -> Result<SharpnessReport, VerifyError> {
    let params = thresholds::threshold_params(r, b)?;
    let h = match thresholds::build_extremal(&params) {
        Ok(h) => h,
        Err(ThresholdError::DegenerateConstruction { eta, .. }) => {
            return Err(VerifyError::DegenerateConstruction { r, b, eta, rho: params.rho })
        }
        Err(e) => return Err(e.into()),
    };
    let partition = thresholds::extremal_partition(&params)?;
    let lambda1 = spectral::lambda_k(&h, 1)?;
    let quotient = spectral::quotient_matrix(&h, &partition)?;
    let quotient_lambda1 = if quotient.order() == 1 {
        quotient.get(0, 0)
    } else {
        spectral::quotient_eigs_2x2(&quotient)?.0
    };
    let structure = thresholds::structure_report(&h, &params);
    let passed = (lambda1 - params.rho).abs() < GUARD
        && (quotient_lambda1 - params.rho).abs() < GUARD
        && structure.matches(&params);
    Ok(SharpnessReport { equitable: spectral::is_equitable(&h, &partition), params, lambda1, quotient_lambda1, structure, passed })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Case2Row {
    pub t: usize,
    pub m12: usize,
    /// Characteristic polynomial of the quotient matrix, evaluated at `rho`.
    pub direct: f64,
    pub factored: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Case2Report {
    pub r: usize,
    pub b: usize,
    pub eta: usize,
    pub rho: f64,
    pub rows: Vec<Case2Row>,
    pub passed: bool,
}

/// For odd `r`, sweeps the edge count `m12 = (r + 2 - eta) eta - t` between
/// the degree-`r` block and the deficient block over `0 <= t <= r + 2 - eta`
/// and checks that the quotient's characteristic polynomial is nonpositive
/// at `rho(r, b)`, matching its closed factored form.
pub fn case2_polynomial_check(r: usize, b: usize) -> Result<Case2Report, VerifyError> {
    let params = thresholds::threshold_params(r, b)?;
    if !params.r_is_odd() {
        return Err(VerifyError::EvenDegree(r));
    }
    let eta = params.eta;
    let rho = params.rho;
    let full = r + 2 - eta;
    let (rf, ef, nf) = (r as f64, eta as f64, full as f64);
    let rows: Vec<Case2Row> = (0..=full)
        .map(|t| {
            let m12 = full * eta - t;
            let m = m12 as f64;
            let q = spectral::QuotientMatrix::from_rows(&[
                vec![rf - m / nf, m / nf],
                vec![m / ef, rf - 1.0 - m / ef],
            ]);
            let direct = q.char_poly_2x2_at(rho).expect("2x2");
            let factored = -(t as f64) * (rf + 2.0) / (nf * ef) * (rho + ef / (rf + 2.0) - rf);
            let passed = direct <= GUARD && (direct - factored).abs() <= GUARD;
            Case2Row { t, m12, direct, factored, passed }
        })
        .collect();
    let passed = rows.iter().all(|row| row.passed);
    Ok(Case2Report { r, b, eta, rho, rows, passed })
}

/// Which values of `b` a sweep or campaign visits for a given `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BPolicy {
    /// Every odd `b < r`.
    AllOdd,
    Fixed(usize),
}

impl BPolicy {
    pub fn values(self, r: usize) -> Vec<usize> {
        match self {
            BPolicy::AllOdd => (1..r).step_by(2).collect(),
            BPolicy::Fixed(b) if b % 2 == 1 && b < r => vec![b],
            BPolicy::Fixed(_) => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub r: usize,
    pub b: usize,
    pub ceil_rb: usize,
    pub epsilon: usize,
    pub eta: usize,
    pub rho: f64,
    pub lwy: f64,
    /// Perfect-matching bounds, only for `b = 1`.
    pub cgh: Option<f64>,
    pub bh: Option<f64>,
    /// `lambda_1(H(r, eta))`, absent when the construction is degenerate.
    pub lambda1_h: Option<f64>,
}

impl SweepRow {
    pub fn improves_on_lwy(&self) -> bool {
        self.rho >= self.lwy
    }

    /// `None` for degenerate constructions.
    pub fn sharp(&self) -> Option<bool> {
        self.lambda1_h.map(|l1| (l1 - self.rho).abs() < GUARD)
    }

    /// Human-readable descriptions of every violated row invariant.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.improves_on_lwy() {
            out.push(format!("({}, {}): rho {} < lwy {}", self.r, self.b, self.rho, self.lwy));
        }
        if self.sharp() == Some(false) {
            out.push(format!("({}, {}): lambda1(H) {:?} != rho {}", self.r, self.b, self.lambda1_h, self.rho));
        }
        out
    }
}

fn sweep_row(r: usize, b: usize) -> Result<SweepRow, VerifyError> {
    let p = thresholds::threshold_params(r, b)?;
    let prior = (b == 1).then(|| thresholds::prior_1factor_thresholds(r)).transpose()?;
    let lambda1_h = match thresholds::build_extremal(&p) {
        Ok(h) => Some(spectral::lambda_k(&h, 1)?),
        Err(ThresholdError::DegenerateConstruction { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(SweepRow {
        r,
        b,
        ceil_rb: p.ceil_rb,
        epsilon: p.epsilon,
        eta: p.eta,
        rho: p.rho,
        lwy: thresholds::lwy_threshold(r, b)?,
        cgh: prior.map(|x| x.cgh),
        bh: prior.map(|x| x.bh),
        lambda1_h,
    })
}

/// One row per `(r, b)` with `3 <= r <= r_max` and `b` from the policy.
pub fn bound_sweep(r_max: usize, policy: BPolicy, exec: Execution) -> Result<Vec<SweepRow>, VerifyError> {
    let pairs: Vec<(usize, usize)> = (3..=r_max).flat_map(|r| policy.values(r).into_iter().map(move |b| (r, b))).collect();
    exec.map_slice(&pairs, |&(r, b)| sweep_row(r, b)).into_iter().collect()
}

pub const SWEEP_CSV_HEADER: &str = "r,b,ceil_rb,epsilon,eta,rho,lwy,cgh,bh,lambda1_H";

/// CSV rendering with floats at `precision` decimals and empty cells for
/// absent values.
pub fn sweep_csv(rows: &[SweepRow], precision: usize) -> String {
    let fmt = |x: Option<f64>| x.map(|v| format!("{v:.precision$}")).unwrap_or_default();
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            row.r,
            row.b,
            row.ceil_rb,
            row.epsilon,
            row.eta,
            fmt(Some(row.rho)),
            fmt(Some(row.lwy)),
            fmt(row.cgh),
            fmt(row.bh),
            fmt(row.lambda1_h),
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignConfig {
    pub trials: usize,
    /// Inclusive range; only even orders are sampled.
    pub n_range: (usize, usize),
    /// Inclusive range of degrees.
    pub r_range: (usize, usize),
    pub b_policy: BPolicy,
    pub master_seed: u64,
    pub execution: Execution,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            trials: 500,
            n_range: (8, 20),
            r_range: (3, 7),
            b_policy: BPolicy::AllOdd,
            master_seed: 0,
            execution: Execution::default(),
        }
    }
}

impl CampaignConfig {
    fn orders_for(&self, r: usize) -> Vec<usize> {
        (self.n_range.0..=self.n_range.1).filter(|&n| n % 2 == 0 && n > r).collect()
    }

    fn validate(&self) -> Result<(), VerifyError> {
        let (lo, hi) = self.r_range;
        if lo < 3 || lo > hi {
            return Err(VerifyError::InvalidCampaign(format!("degree range {lo}..={hi} must start at 3 or more")));
        }
        for r in lo..=hi {
            if self.orders_for(r).is_empty() {
                return Err(VerifyError::InvalidCampaign(format!("no even order above {r} in range")));
            }
            if self.b_policy.values(r).is_empty() {
                return Err(VerifyError::InvalidCampaign(format!("no admissible b for r = {r}")));
            }
        }
        Ok(())
    }
}

/// Everything needed to rebuild a failing trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub seed: u64,
    pub r: usize,
    pub b: usize,
    pub lambda3: f64,
    pub rho: f64,
    pub edge_list: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignSummary {
    pub trials: usize,
    pub applicable: usize,
    pub found: usize,
    pub inapplicable: usize,
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip)]
    pub reports: Vec<TrialReport>,
}

impl CampaignSummary {
    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn run_trial(cfg: &CampaignConfig, trial: usize) -> Result<(TrialReport, Option<Counterexample>), VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.master_seed);
    rng.set_stream(trial as u64);
    let r = rng.gen_range(cfg.r_range.0..=cfg.r_range.1);
    let orders = cfg.orders_for(r);
    let n = orders[rng.gen_range(0..orders.len())];
    let bs = cfg.b_policy.values(r);
    let b = bs[rng.gen_range(0..bs.len())];
    // resample until connected; the theorem says nothing about other graphs
    let (seed, g) = (0..DEFAULT_RETRY_BUDGET)
        .map(|_| rng.gen::<u64>())
        .map(|seed| random_regular(n, r, seed).map(|g| (seed, g)))
        .find(|res| res.as_ref().map_or(true, |(_, g)| g.components().len() == 1))
        .unwrap_or(Err(VerifyError::RetryExhausted(DEFAULT_RETRY_BUDGET)))?;
    let mut report = theorem_check(&g, b)?;
    report.seed = Some(seed);
    let counterexample = report.is_counterexample().then(|| Counterexample {
        trial,
        seed,
        r,
        b,
        lambda3: report.lambda3,
        rho: report.rho,
        edge_list: serialize_edge_list(&g),
    });
    Ok((report, counterexample))
}

/// Runs independent theorem checks on random regular graphs.
///
/// Trial `i` draws its parameters and graph seed from a generator seeded by
/// `master_seed` on stream `i`, so the summary depends only on the config.
pub fn randomized_theorem_campaign(cfg: &CampaignConfig) -> Result<CampaignSummary, VerifyError> {
    if cfg.trials > 0 {
        cfg.validate()?;
    }
    let results = cfg.execution.map_range(cfg.trials, |i| run_trial(cfg, i));
    let mut summary = CampaignSummary {
        trials: cfg.trials,
        applicable: 0,
        found: 0,
        inapplicable: 0,
        counterexamples: Vec::new(),
        reports: Vec::with_capacity(cfg.trials),
    };
    for result in results {
        let (report, counterexample) = result?;
        if report.implication_applicable {
            summary.applicable += 1;
            if report.factor_found == Some(true) {
                summary.found += 1;
            }
        } else {
            summary.inapplicable += 1;
        }
        summary.counterexamples.extend(counterexample);
        summary.reports.push(report);
    }
    Ok(summary)
}

/// An `r`-regular graph of even order without an odd `[1, b]`-factor for any
/// odd `b < r`, for odd `r >= 3`.
///
/// A centre vertex is joined to `r` copies of a gadget on `r + 2` vertices:
/// the complement of a 3-vertex path plus a perfect matching on the rest.
/// The middle vertex of the path has degree `r - 1` inside the gadget and
/// takes the edge to the centre. Removing the centre leaves `r` odd
/// components, more than `b` for every `b < r`.
pub fn bridged_gadget_graph(r: usize) -> Option<Graph> {
    if r < 3 || r % 2 == 0 {
        return None;
    }
    let k = r + 2;
    let mut removed = vec![(0, 1), (1, 2)];
    removed.extend((3..k).step_by(2).map(|i| (i, i + 1)));
    let gadget_edges: Vec<(usize, usize)> = (0..k)
        .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
        .filter(|e| !removed.contains(e))
        .collect();
    let mut edges = Vec::new();
    for copy in 0..r {
        let offset = 1 + copy * k;
        edges.extend(gadget_edges.iter().map(|&(u, v)| (u + offset, v + offset)));
        edges.push((0, offset + 1));
    }
    Some(Graph::from_edges(1 + r * k, edges).expect("gadget edges are simple"))
}
