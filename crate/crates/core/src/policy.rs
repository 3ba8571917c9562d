//! Hop-by-hop parent selection: the four local policies, the wired bias
//! functions and the iterative path builder.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{shannon_rate, LinkTable};
use crate::error::{Error, Result};
use crate::geometry::{half_plane_filter, nearest_wired, Deployment, Located, Position};
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolicyKind {
    /// Highest-quality-first: best SNR.
    #[serde(rename = "HQF")]
    Hqf,
    /// Wired-first: any reachable wired gNB, else HQF.
    #[serde(rename = "WF")]
    Wf,
    /// Position-aware: best SNR among parents closer to a wired gNB.
    #[serde(rename = "PA")]
    Pa,
    /// Maximum local rate: best load-scaled Shannon rate.
    #[serde(rename = "MLR")]
    Mlr,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [PolicyKind::Hqf, PolicyKind::Wf, PolicyKind::Pa, PolicyKind::Mlr];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Hqf => "HQF",
            PolicyKind::Wf => "WF",
            PolicyKind::Pa => "PA",
            PolicyKind::Mlr => "MLR",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyKind::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::config(
                    "policy",
                    format!("unknown policy `{s}`; valid names are HQF, WF, PA, MLR"),
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WbfKind {
    None,
    Polynomial,
    Exponential,
}

/// Wired bias function: an additive dB bonus on wired candidates that grows
/// with the number of hops already traveled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WbfConfig<T> {
    pub kind: WbfKind,
    /// Hop threshold `N_ht`.
    pub hop_threshold: u32,
    /// Polynomial degree `k`.
    pub poly_degree: T,
    /// Exponential base `gamma`, at least 1.
    pub exp_base: T,
    pub snr_gap_db: T,
    pub hysteresis_db: T,
}

/// Named bias presets.
pub const WBF_PRESETS: [&str; 4] = [
    "aggressive_poly",
    "conservative_poly",
    "aggressive_exp",
    "conservative_exp",
];

impl<T: Real> WbfConfig<T> {
    pub fn none() -> Self {
        Self {
            kind: WbfKind::None,
            hop_threshold: 1,
            poly_degree: T::one(),
            exp_base: T::one(),
            snr_gap_db: T::zero(),
            hysteresis_db: T::zero(),
        }
    }

    pub fn polynomial(hop_threshold: u32, k: T, gap_db: T, hysteresis_db: T) -> Self {
        Self {
            kind: WbfKind::Polynomial,
            hop_threshold,
            poly_degree: k,
            snr_gap_db: gap_db,
            hysteresis_db,
            ..Self::none()
        }
    }

    pub fn exponential(hop_threshold: u32, gamma: T, gap_db: T, hysteresis_db: T) -> Self {
        Self {
            kind: WbfKind::Exponential,
            hop_threshold,
            exp_base: gamma,
            snr_gap_db: gap_db,
            hysteresis_db,
            ..Self::none()
        }
    }

    pub fn aggressive_poly() -> Self {
        Self::polynomial(1, T::lit(3.0), T::lit(15.0), T::lit(2.0))
    }

    pub fn conservative_poly() -> Self {
        Self::polynomial(6, T::one(), T::lit(5.0), T::lit(2.0))
    }

    pub fn aggressive_exp() -> Self {
        Self::exponential(1, T::lit(3.0), T::lit(15.0), T::lit(2.0))
    }

    pub fn conservative_exp() -> Self {
        Self::exponential(6, T::lit(1.5), T::lit(5.0), T::lit(2.0))
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "aggressive_poly" => Ok(Self::aggressive_poly()),
            "conservative_poly" => Ok(Self::conservative_poly()),
            "aggressive_exp" => Ok(Self::aggressive_exp()),
            "conservative_exp" => Ok(Self::conservative_exp()),
            "none" => Ok(Self::none()),
            other => Err(Error::config(
                "wbf",
                format!(
                    "unknown preset `{other}`; valid presets are none, {}",
                    WBF_PRESETS.join(", ")
                ),
            )),
        }
    }

    /// Name of the preset this config equals, if any.
    pub fn preset_name(&self) -> Option<&'static str> {
        ["none"]
            .into_iter()
            .chain(WBF_PRESETS)
            .find(|n| Self::preset(n).map(|p| p == *self).unwrap_or(false))
    }

    pub fn validate(&self) -> Result<()> {
        if self.hop_threshold < 1 {
            return Err(Error::config("n_ht", "hop threshold must be at least 1"));
        }
        if !(self.exp_base >= T::one() && self.exp_base.is_finite()) {
            return Err(Error::config(
                "gamma",
                "exponential base must be >= 1, otherwise the bias decreases with the hop count",
            ));
        }
        if !(self.poly_degree > T::zero() && self.poly_degree.is_finite()) {
            return Err(Error::config("k", "polynomial degree must be positive"));
        }
        if !(self.snr_gap_db >= T::zero() && self.snr_gap_db.is_finite()) {
            return Err(Error::config("gamma_gap_db", "SNR gap must be nonnegative"));
        }
        if !(self.hysteresis_db >= T::zero() && self.hysteresis_db.is_finite()) {
            return Err(Error::config("gamma_h_db", "hysteresis must be nonnegative"));
        }
        Ok(())
    }

    fn hop_ratio(&self, hops: usize) -> T {
        T::from_usize_lossy(hops) / T::from_u32(self.hop_threshold).expect("u32 fits")
    }

    /// `(N / N_ht)^k`.
    pub fn poly_factor(&self, hops: usize) -> T {
        self.hop_ratio(hops).powf(self.poly_degree)
    }

    /// `gamma^(N / N_ht)`.
    pub fn exp_factor(&self, hops: usize) -> T {
        self.exp_base.powf(self.hop_ratio(hops))
    }

    /// Bias in dB after `hops` hops; zero when disabled.
    pub fn bias_db(&self, hops: usize) -> T {
        match self.kind {
            WbfKind::None => T::zero(),
            WbfKind::Polynomial => wbf_poly(hops, self),
            WbfKind::Exponential => wbf_exp(hops, self),
        }
    }
}

/// `(N / N_ht)^k * gap + hysteresis`.
pub fn wbf_poly<T: Real>(hops: usize, cfg: &WbfConfig<T>) -> T {
    cfg.poly_factor(hops) * cfg.snr_gap_db + cfg.hysteresis_db
}

/// `gamma^(N / N_ht) * gap + hysteresis`.
pub fn wbf_exp<T: Real>(hops: usize, cfg: &WbfConfig<T>) -> T {
    cfg.exp_factor(hops) * cfg.snr_gap_db + cfg.hysteresis_db
}

/// A feasible parent as seen from the current node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate<T> {
    pub id: usize,
    pub raw_snr_db: T,
    pub is_wired: bool,
    pub attached_count: usize,
    pub position: Position<T>,
}

impl<T: Copy> Located<T> for Candidate<T> {
    fn position(&self) -> Position<T> {
        self.position
    }
}

/// Unvisited gNBs reachable from `current` with raw SNR at or above the
/// threshold, sorted by id.
pub fn candidate_set<T: Real>(
    current: usize,
    deployment: &Deployment<T>,
    links: &LinkTable<T>,
    visited: &BTreeSet<usize>,
    snr_threshold_db: T,
) -> Vec<Candidate<T>> {
    deployment
        .gnbs
        .iter()
        .filter(|g| g.id != current && !visited.contains(&g.id))
        .filter_map(|g| {
            let snr = links.snr(current, g.id);
            (snr >= snr_threshold_db).then_some(Candidate {
                id: g.id,
                raw_snr_db: snr,
                is_wired: g.is_wired,
                attached_count: g.attached_count,
                position: g.position,
            })
        })
        .collect()
}

/// Selection metric in dB: raw SNR plus the bias for wired candidates.
pub fn biased_metric<T: Real>(c: &Candidate<T>, hops: usize, wbf: &WbfConfig<T>) -> T {
    if c.is_wired && wbf.kind != WbfKind::None {
        c.raw_snr_db + wbf.bias_db(hops)
    } else {
        c.raw_snr_db
    }
}

/// Argmax of `score`; ties go to wired candidates, then to the lowest id.
fn argmax_by<T: Real>(candidates: &[Candidate<T>], score: impl Fn(&Candidate<T>) -> T) -> Option<usize> {
    candidates
        .iter()
        .map(|c| (score(c), c))
        .max_by(|(sa, a), (sb, b)| {
            sa.partial_cmp(sb)
                .unwrap_or(Ordering::Equal)
                .then(a.is_wired.cmp(&b.is_wired))
                .then(b.id.cmp(&a.id))
        })
        .map(|(_, c)| c.id)
}

pub fn select_hqf<T: Real>(candidates: &[Candidate<T>], hops: usize, wbf: &WbfConfig<T>) -> Option<usize> {
    argmax_by(candidates, |c| biased_metric(c, hops, wbf))
}

/// Wired candidate with the best raw SNR if any, otherwise HQF.
pub fn select_wf<T: Real>(candidates: &[Candidate<T>], hops: usize, wbf: &WbfConfig<T>) -> Option<usize> {
    let wired: Vec<Candidate<T>> = candidates.iter().filter(|c| c.is_wired).copied().collect();
    if wired.is_empty() {
        select_hqf(candidates, hops, wbf)
    } else {
        argmax_by(&wired, |c| c.raw_snr_db)
    }
}

/// HQF restricted to candidates on the far side of the line through
/// `current` perpendicular to the direction of its nearest wired gNB. When
/// that half-plane is empty, `fallback` decides between unfiltered HQF and
/// no selection.
pub fn select_pa<T: Real>(
    current: usize,
    candidates: &[Candidate<T>],
    deployment: &Deployment<T>,
    hops: usize,
    wbf: &WbfConfig<T>,
    fallback: bool,
) -> Option<usize> {
    if candidates.is_empty() {
        return None;
    }
    let target = nearest_wired(current, deployment)?;
    let here = deployment.node(current).position;
    let forward = half_plane_filter(here, deployment.node(target).position, candidates);
    if !forward.is_empty() {
        select_hqf(&forward, hops, wbf)
    } else if fallback {
        select_hqf(candidates, hops, wbf)
    } else {
        None
    }
}

/// Best `B / N_j * log2(1 + snr)`, with the bias applied to the SNR in dB
/// before the rate is computed.
pub fn select_mlr<T: Real>(
    candidates: &[Candidate<T>],
    bandwidth_hz: T,
    hops: usize,
    wbf: &WbfConfig<T>,
) -> Option<usize> {
    argmax_by(candidates, |c| {
        shannon_rate(bandwidth_hz, biased_metric(c, hops, wbf), c.attached_count)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Success,
    NoCandidate,
    MaxHops,
}

/// How a path was chosen: a local policy, or the centralized widest path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Router {
    Policy(PolicyKind),
    WidestPath,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathResult<T> {
    pub origin: usize,
    /// Traversed parents in order; the last one is the terminal node.
    pub hops: Vec<usize>,
    /// Raw SNR of each traversed link, aligned with `hops`.
    pub link_snrs_db: Vec<T>,
    /// Weakest link, `None` when no link was traversed.
    pub bottleneck_snr_db: Option<T>,
    pub outcome: Outcome,
    pub router: Router,
    pub wbf: WbfConfig<T>,
}

impl<T: Real> PathResult<T> {
    pub(crate) fn from_links(
        origin: usize,
        hops: Vec<usize>,
        link_snrs_db: Vec<T>,
        outcome: Outcome,
        router: Router,
        wbf: WbfConfig<T>,
    ) -> Self {
        let bottleneck_snr_db = link_snrs_db.iter().copied().reduce(T::min);
        Self {
            origin,
            hops,
            link_snrs_db,
            bottleneck_snr_db,
            outcome,
            router,
            wbf,
        }
    }

    pub fn hop_count(&self) -> usize {
        self.hops.len()
    }

    pub fn is_success(&self) -> bool {
        self.outcome == Outcome::Success
    }

    pub fn terminal(&self) -> Option<usize> {
        self.hops.last().copied()
    }
}

/// Knobs of the path builder that are shared by every policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathRules<T> {
    pub snr_threshold_db: T,
    pub max_hops: usize,
    /// Bandwidth for the MLR rate metric.
    pub bandwidth_hz: T,
    /// PA falls back to unfiltered HQF when the forward half-plane is empty.
    pub pa_fallback: bool,
}

impl<T: Real> Default for PathRules<T> {
    fn default() -> Self {
        Self {
            snr_threshold_db: T::lit(5.0),
            max_hops: 30,
            bandwidth_hz: T::lit(400e6),
            pa_fallback: true,
        }
    }
}

/// Applies one policy's selector.
pub fn select<T: Real>(
    policy: PolicyKind,
    current: usize,
    candidates: &[Candidate<T>],
    deployment: &Deployment<T>,
    hops: usize,
    wbf: &WbfConfig<T>,
    rules: &PathRules<T>,
) -> Option<usize> {
    match policy {
        PolicyKind::Hqf => select_hqf(candidates, hops, wbf),
        PolicyKind::Wf => select_wf(candidates, hops, wbf),
        PolicyKind::Pa => select_pa(current, candidates, deployment, hops, wbf, rules.pa_fallback),
        PolicyKind::Mlr => select_mlr(candidates, rules.bandwidth_hz, hops, wbf),
    }
}

/// Greedy hop-by-hop path from `origin` until a wired gNB is chosen, no
/// feasible unvisited parent remains, or `max_hops` is reached.
pub fn build_path<T: Real>(
    origin: usize,
    policy: PolicyKind,
    wbf: &WbfConfig<T>,
    deployment: &Deployment<T>,
    links: &LinkTable<T>,
    rules: &PathRules<T>,
) -> Result<PathResult<T>> {
    if origin >= deployment.len() {
        return Err(Error::InvalidArgument(format!("origin {origin} not in deployment")));
    }
    if deployment.node(origin).is_wired {
        return Err(Error::InvalidArgument(format!("origin {origin} is a wired gNB")));
    }

    let mut visited = BTreeSet::from([origin]);
    let mut hops = Vec::new();
    let mut snrs = Vec::new();
    let mut current = origin;

    let outcome = loop {
        if hops.len() >= rules.max_hops {
            break Outcome::MaxHops;
        }
        let cands = candidate_set(current, deployment, links, &visited, rules.snr_threshold_db);
        let Some(next) = select(policy, current, &cands, deployment, hops.len(), wbf, rules) else {
            break Outcome::NoCandidate;
        };
        snrs.push(links.snr(current, next));
        hops.push(next);
        visited.insert(next);
        current = next;
        if deployment.node(next).is_wired {
            break Outcome::Success;
        }
    };

    Ok(PathResult::from_links(origin, hops, snrs, outcome, Router::Policy(policy), *wbf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{GnbNode, Region};
    use approx::assert_abs_diff_eq;

    fn cand(id: usize, snr: f64, wired: bool) -> Candidate<f64> {
        Candidate {
            id,
            raw_snr_db: snr,
            is_wired: wired,
            attached_count: 1,
            position: Position::new(0.0, 0.0),
        }
    }

    fn node(id: usize, x: f64, y: f64, wired: bool) -> GnbNode<f64> {
        GnbNode {
            id,
            position: Position::new(x, y),
            is_wired: wired,
            sector_boresights: vec![0.0],
            attached_count: 0,
        }
    }

    fn dep(nodes: Vec<GnbNode<f64>>) -> Deployment<f64> {
        Deployment {
            region: Region::square_km(),
            gnbs: nodes,
            ue_positions: vec![],
            origin_id: 0,
        }
    }

    #[test]
    fn poly_examples() {
        let cfg = WbfConfig::polynomial(6, 1.0, 5.0, 2.0);
        assert_abs_diff_eq!(cfg.poly_factor(1), 0.1667, epsilon = 1e-4);
        assert_abs_diff_eq!(wbf_poly(1, &cfg), 2.8333, epsilon = 1e-4);
        assert_abs_diff_eq!(wbf_poly(6, &cfg), 7.0, epsilon = 1e-12);
        assert_eq!(wbf_poly(0, &cfg), 2.0);
    }

    #[test]
    fn exp_examples() {
        let cfg = WbfConfig::exponential(6, 1.5, 5.0, 2.0);
        assert_abs_diff_eq!(cfg.exp_factor(1), 1.0699, epsilon = 1e-4);
        assert_eq!(wbf_exp(0, &cfg), 7.0);
        let agg = WbfConfig::<f64>::aggressive_exp();
        assert_abs_diff_eq!(wbf_exp(2, &agg), 137.0, epsilon = 1e-9);
    }

    #[test]
    fn presets_expand() {
        let a = WbfConfig::<f64>::preset("aggressive_exp").unwrap();
        assert_eq!((a.kind, a.hop_threshold, a.exp_base, a.snr_gap_db, a.hysteresis_db),
            (WbfKind::Exponential, 1, 3.0, 15.0, 2.0));
        let c = WbfConfig::<f64>::preset("conservative_poly").unwrap();
        assert_eq!((c.kind, c.hop_threshold, c.poly_degree, c.snr_gap_db, c.hysteresis_db),
            (WbfKind::Polynomial, 6, 1.0, 5.0, 2.0));
        assert!(WbfConfig::<f64>::preset("bogus").is_err());
        assert_eq!(a.preset_name(), Some("aggressive_exp"));
        assert_eq!(WbfConfig::<f64>::polynomial(2, 1.0, 1.0, 0.0).preset_name(), None);
    }

    #[test]
    fn wbf_validation() {
        let bad = WbfConfig::exponential(6, 0.5, 5.0, 2.0);
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig { key, .. }) if key == "gamma"));
        assert!(WbfConfig::polynomial(0, 1.0, 5.0, 2.0).validate().is_err());
        assert!(WbfConfig::polynomial(1, 1.0, -5.0, 2.0).validate().is_err());
        assert!(WbfConfig::<f64>::aggressive_poly().validate().is_ok());
    }

    #[test]
    fn exp_dominates_poly_for_matched_presets() {
        for (p, e) in [
            (WbfConfig::<f64>::aggressive_poly(), WbfConfig::<f64>::aggressive_exp()),
            (WbfConfig::conservative_poly(), WbfConfig::conservative_exp()),
        ] {
            for n in 0..=30 {
                assert!(wbf_exp(n, &e) >= wbf_poly(n, &p), "n = {n}");
            }
        }
    }

    #[test]
    fn candidate_set_threshold_and_visited() {
        let d = dep(vec![node(0, 0.0, 0.0, false), node(1, 1.0, 0.0, false), node(2, 2.0, 0.0, false), node(3, 3.0, 0.0, true)]);
        let links = LinkTable::from_snrs(4, &[(0, 1, 4.9), (0, 2, 5.0), (0, 3, 20.0)]);
        let mut visited = BTreeSet::from([0]);
        let ids: Vec<usize> = candidate_set(0, &d, &links, &visited, 5.0).iter().map(|c| c.id).collect();
        assert_eq!(ids, vec![2, 3]);
        visited.insert(2);
        let ids: Vec<usize> = candidate_set(0, &d, &links, &visited, 5.0).iter().map(|c| c.id).collect();
        assert_eq!(ids, vec![3]);
        let none = LinkTable::from_snrs(4, &[]);
        assert!(candidate_set(0, &d, &none, &BTreeSet::new(), 5.0).is_empty());
    }

    #[test]
    fn biased_metric_examples() {
        let w = WbfConfig::polynomial(6, 1.0, 5.0, 2.0);
        assert_abs_diff_eq!(biased_metric(&cand(1, 6.0, true), 1, &w), 8.8333, epsilon = 1e-4);
        assert_eq!(biased_metric(&cand(1, 6.0, false), 1, &w), 6.0);
        assert_eq!(biased_metric(&cand(1, 6.0, true), 1, &WbfConfig::none()), 6.0);
    }

    #[test]
    fn hqf_examples() {
        let none = WbfConfig::none();
        assert_eq!(select_hqf(&[cand(0, 7.0, false), cand(1, 10.0, false), cand(2, 6.0, false)], 0, &none), Some(1));
        // W(N) = 5 at any N: gap 0, hysteresis 5
        let flat = WbfConfig::polynomial(1, 1.0, 0.0, 5.0);
        assert_eq!(select_hqf(&[cand(0, 10.0, false), cand(1, 6.0, true)], 0, &flat), Some(1));
        assert_eq!(select_hqf(&[cand(0, 8.0, false), cand(5, 8.0, true)], 0, &none), Some(5));
        assert_eq!(select_hqf(&[cand(3, 8.0, false), cand(1, 8.0, false)], 0, &none), Some(1));
        assert_eq!(select_hqf::<f64>(&[], 0, &none), None);
    }

    #[test]
    fn wf_examples() {
        let none = WbfConfig::none();
        assert_eq!(select_wf(&[cand(0, 6.0, true), cand(1, 12.0, false)], 0, &none), Some(0));
        assert_eq!(select_wf(&[cand(0, 6.0, true), cand(1, 9.0, true), cand(2, 30.0, false)], 0, &none), Some(1));
        let c = [cand(0, 6.0, false), cand(1, 9.0, false)];
        assert_eq!(select_wf(&c, 0, &none), select_hqf(&c, 0, &none));
    }

    #[test]
    fn pa_examples() {
        // current 0 at origin, nearest wired 3 at (100, 0)
        let d = dep(vec![
            node(0, 0.0, 0.0, false),
            node(1, 20.0, 5.0, false),
            node(2, -30.0, 0.0, false),
            node(3, 100.0, 0.0, true),
            node(4, -40.0, 40.0, false),
        ]);
        let mk = |id: usize, snr: f64| Candidate { position: d.node(id).position, is_wired: d.node(id).is_wired, ..cand(id, snr, false) };
        let none = WbfConfig::none();
        // forward at 6 dB beats behind at 20 dB
        assert_eq!(select_pa(0, &[mk(1, 6.0), mk(2, 20.0)], &d, 0, &none, true), Some(1));
        // everything behind: fallback picks best overall, strict mode fails
        assert_eq!(select_pa(0, &[mk(2, 7.0), mk(4, 12.0)], &d, 0, &none, true), Some(4));
        assert_eq!(select_pa(0, &[mk(2, 7.0), mk(4, 12.0)], &d, 0, &none, false), None);
        // the wired target itself is forward
        assert_eq!(select_pa(0, &[mk(1, 6.0), mk(3, 9.0)], &d, 0, &none, true), Some(3));
    }

    #[test]
    fn mlr_examples() {
        let none = WbfConfig::none();
        let a = Candidate { attached_count: 4, ..cand(0, 10.0, false) };
        let b = Candidate { attached_count: 1, ..cand(1, 7.0, false) };
        assert_eq!(select_mlr(&[a, b], 400e6, 0, &none), Some(1));
        let a = Candidate { attached_count: 1, ..cand(0, 10.0, false) };
        let b = Candidate { attached_count: 2, ..cand(1, 10.0, false) };
        assert_eq!(select_mlr(&[a, b], 400e6, 0, &none), Some(0));
        assert_eq!(select_mlr(&[b], 400e6, 0, &none), Some(1));
    }

    #[test]
    fn build_path_single_hop() {
        let d = dep(vec![node(0, 0.0, 0.0, false), node(1, 50.0, 0.0, true), node(2, 10.0, 0.0, false)]);
        let links = LinkTable::from_snrs(3, &[(0, 1, 20.0), (0, 2, 30.0)]);
        let r = build_path(0, PolicyKind::Wf, &WbfConfig::none(), &d, &links, &PathRules::default()).unwrap();
        assert_eq!(r.hops, vec![1]);
        assert_eq!(r.bottleneck_snr_db, Some(20.0));
        assert_eq!(r.outcome, Outcome::Success);
    }

    #[test]
    fn build_path_dead_end() {
        let d = dep(vec![node(0, 0.0, 0.0, false), node(1, 50.0, 0.0, false), node(2, 900.0, 0.0, true)]);
        let links = LinkTable::from_snrs(3, &[(0, 1, 20.0)]);
        let r = build_path(0, PolicyKind::Hqf, &WbfConfig::none(), &d, &links, &PathRules::default()).unwrap();
        assert_eq!(r.hops, vec![1]);
        assert_eq!(r.outcome, Outcome::NoCandidate);
        let lonely = LinkTable::from_snrs(3, &[]);
        let r = build_path(0, PolicyKind::Hqf, &WbfConfig::none(), &d, &lonely, &PathRules::default()).unwrap();
        assert!(r.hops.is_empty());
        assert_eq!(r.bottleneck_snr_db, None);
        assert_eq!(r.outcome, Outcome::NoCandidate);
    }

    #[test]
    fn build_path_rejects_wired_origin() {
        let d = dep(vec![node(0, 0.0, 0.0, true), node(1, 50.0, 0.0, false)]);
        let links = LinkTable::from_snrs(2, &[(0, 1, 20.0)]);
        assert!(matches!(
            build_path(0, PolicyKind::Hqf, &WbfConfig::none(), &d, &links, &PathRules::default()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn build_path_max_hops() {
        // chain 0-1-2-3-4(wired), HQF follows it
        let d = dep((0..5).map(|i| node(i, i as f64 * 10.0, 0.0, i == 4)).collect());
        let links = LinkTable::from_snrs(5, &[(0, 1, 30.0), (1, 2, 30.0), (2, 3, 30.0), (3, 4, 30.0)]);
        let rules = PathRules { max_hops: 2, ..PathRules::default() };
        let r = build_path(0, PolicyKind::Hqf, &WbfConfig::none(), &d, &links, &rules).unwrap();
        assert_eq!(r.outcome, Outcome::MaxHops);
        assert_eq!(r.hop_count(), 2);
        let r = build_path(0, PolicyKind::Hqf, &WbfConfig::none(), &d, &links, &PathRules::default()).unwrap();
        assert_eq!(r.hops, vec![1, 2, 3, 4]);
        assert!(r.is_success());
    }

    #[test]
    fn policy_names_parse() {
        for p in PolicyKind::ALL {
            assert_eq!(p.name().parse::<PolicyKind>().unwrap(), p);
        }
        assert_eq!("hqf".parse::<PolicyKind>().unwrap(), PolicyKind::Hqf);
        let err = "XYZ".parse::<PolicyKind>().unwrap_err().to_string();
        assert!(err.contains("HQF, WF, PA, MLR"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn cands() -> impl Strategy<Value = Vec<Candidate<f64>>> {
            prop::collection::vec((5.0..60.0_f64, any::<bool>(), 0usize..10), 1..12).prop_map(|v| {
                v.into_iter().enumerate().map(|(i, (s, w, n))| Candidate { attached_count: n, ..cand(i, s, w) }).collect()
            })
        }

        proptest! {
            #[test]
            fn wbf_nondecreasing(nht in 1u32..10, k in 0.1..4.0_f64, g in 1.0..4.0_f64, gap in 0.0..20.0_f64, h in 0.0..5.0_f64) {
                let p = WbfConfig::polynomial(nht, k, gap, h);
                let e = WbfConfig::exponential(nht, g, gap, h);
                for n in 0..30 {
                    prop_assert!(wbf_poly(n + 1, &p) >= wbf_poly(n, &p));
                    prop_assert!(wbf_exp(n + 1, &e) >= wbf_exp(n, &e));
                }
            }

            #[test]
            fn hqf_shift_invariant(c in cands(), shift in -3.0..40.0_f64) {
                let none = WbfConfig::none();
                let shifted: Vec<Candidate<f64>> = c.iter().map(|x| Candidate { raw_snr_db: x.raw_snr_db + shift, ..*x }).collect();
                prop_assert_eq!(select_hqf(&c, 0, &none), select_hqf(&shifted, 0, &none));
            }

            #[test]
            fn huge_gap_hqf_equals_wf(c in cands(), n in 0usize..10) {
                prop_assume!(c.iter().any(|x| x.is_wired));
                // gamma = 1 keeps the factor at 1 for every N, including N = 0
                let huge = WbfConfig::exponential(1, 1.0, 1e6, 2.0);
                prop_assert_eq!(select_hqf(&c, n, &huge), select_wf(&c, n, &WbfConfig::none()));
            }
        }
    }
}
