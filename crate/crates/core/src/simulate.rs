//! Monte Carlo campaign: per-repetition world generation, policy execution on
//! a shared channel realization, widest-path benchmark and aggregation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cdf::EmpiricalCdf;
use crate::channel::{draw_los_state, pathloss_db, ChannelParams, LinkTable, RadioConfig};
use crate::error::{Error, Result};
use crate::geometry::{assign_roles, sample_ppp, Deployment, Region};
use crate::num::Real;
use crate::oracle::widest_path_oracle;
use crate::policy::{build_path, Outcome, PathResult, PathRules, PolicyKind, WbfConfig};

/// Redraws allowed when a PPP realization has fewer than two gNBs.
const MAX_DEPLOYMENT_DRAWS: usize = 10_000;

/// One policy curve of a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec {
    /// Unique name, used for output file paths.
    pub label: String,
    pub kind: PolicyKind,
    pub wbf: WbfConfig<f64>,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind, wbf: WbfConfig<f64>) -> Self {
        let label = match wbf.preset_name() {
            Some("none") => kind.name().to_string(),
            Some(preset) => format!("{}-{}", kind.name(), preset),
            None => format!("{}-custom", kind.name()),
        };
        Self { label, kind, wbf }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// gNB density, per km^2.
    pub lambda_g: f64,
    /// Probability that a gNB has a wired backhaul.
    pub p_w: f64,
    /// UE density, per km^2 (only affects MLR through the load).
    pub lambda_ue: f64,
    pub region: Region<f64>,
    pub radio: RadioConfig<f64>,
    pub channel: ChannelParams<f64>,
    pub policies: Vec<PolicySpec>,
    pub repetitions: usize,
    pub master_seed: u64,
    pub max_hops: usize,
    pub oracle_enabled: bool,
    pub pa_fallback: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            lambda_g: 30.0,
            p_w: 0.3,
            lambda_ue: 100.0,
            region: Region::square_km(),
            radio: RadioConfig::default(),
            channel: ChannelParams::default(),
            policies: PolicyKind::ALL
                .into_iter()
                .map(|k| PolicySpec::new(k, WbfConfig::none()))
                .collect(),
            repetitions: 20_000,
            master_seed: 1,
            max_hops: 30,
            oracle_enabled: false,
            pa_fallback: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_g > 0.0 && self.lambda_g.is_finite()) {
            return Err(Error::config("lambda_g", "gNB density must be positive"));
        }
        if !(self.p_w > 0.0 && self.p_w < 1.0) {
            return Err(Error::config("p_w", "wired fraction must lie strictly between 0 and 1"));
        }
        if !(self.lambda_ue >= 0.0 && self.lambda_ue.is_finite()) {
            return Err(Error::config("lambda_ue", "UE density must be nonnegative"));
        }
        Region::new(self.region.width, self.region.height)?;
        self.radio.validate()?;
        self.channel.validate()?;
        if self.repetitions == 0 {
            return Err(Error::config("repetitions", "need at least one repetition"));
        }
        if self.max_hops == 0 {
            return Err(Error::config("max_hops", "must be at least 1"));
        }
        if self.policies.is_empty() {
            return Err(Error::config("policies", "at least one policy is required"));
        }
        for (i, p) in self.policies.iter().enumerate() {
            p.wbf.validate().map_err(|e| match e {
                Error::InvalidConfig { key, reason } => {
                    Error::config(format!("policies[{i}].wbf.{key}"), reason)
                }
                other => other,
            })?;
            if p.label.is_empty()
                || !p
                    .label
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
                || p.label.starts_with('.')
            {
                return Err(Error::config(
                    format!("policies[{i}].label"),
                    format!("`{}` must be nonempty and use only [A-Za-z0-9_.-]", p.label),
                ));
            }
            if self.policies[..i].iter().any(|q| q.label == p.label) {
                return Err(Error::config(
                    format!("policies[{i}].label"),
                    format!("duplicate label `{}`", p.label),
                ));
            }
        }
        Ok(())
    }

    /// Non-fatal issues worth reporting.
    pub fn warnings(&self) -> Vec<String> {
        let expected = self.lambda_g * self.region.width * self.region.height / 1e6;
        if expected < 3.0 {
            vec![format!(
                "only {expected:.2} gNBs expected per deployment; sparse draws are resampled"
            )]
        } else {
            vec![]
        }
    }

    pub fn path_rules<T: Real>(&self) -> PathRules<T> {
        PathRules {
            snr_threshold_db: T::lit(self.radio.snr_threshold_db),
            max_hops: self.max_hops,
            bandwidth_hz: T::lit(self.radio.bandwidth_hz),
            pa_fallback: self.pa_fallback,
        }
    }
}

/// Independent stream for repetition `rep_index`: ChaCha keyed by the master
/// seed, with the repetition index as stream id.
pub fn repetition_rng(master_seed: u64, rep_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(rep_index);
    rng
}

/// One realized topology and its channel.
#[derive(Debug, Clone)]
pub struct World<T> {
    pub deployment: Deployment<T>,
    pub links: LinkTable<T>,
}

/// Draws gNBs, roles, UEs with smallest-pathloss association, then every
/// gNB-gNB link.
pub fn sample_world<T: Real, R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Result<World<T>> {
    let region = Region::new(T::lit(cfg.region.width), T::lit(cfg.region.height))?;
    let radio: RadioConfig<T> = cfg.radio.cast();
    let params: ChannelParams<T> = cfg.channel.cast();

    let mut positions = Vec::new();
    for attempt in 0.. {
        positions = sample_ppp(cfg.lambda_g, &region, rng)?;
        if positions.len() >= 2 {
            break;
        }
        if attempt + 1 >= MAX_DEPLOYMENT_DRAWS {
            return Err(Error::config("lambda_g", "density too low to draw two gNBs"));
        }
    }
    let mut deployment = assign_roles(&positions, region, cfg.p_w, radio.sectors as usize, rng)?;

    if cfg.lambda_ue > 0.0 {
        deployment.ue_positions = sample_ppp(cfg.lambda_ue, &region, rng)?;
        for ue in deployment.ue_positions.clone() {
            let mut best: Option<(T, usize)> = None;
            for g in &deployment.gnbs {
                let d = ue.distance(&g.position);
                let los = draw_los_state(d, &params, rng);
                let (pl, shadow) = pathloss_db(d, los, &params, rng);
                let total = pl + shadow;
                if total.is_finite() && best.is_none_or(|(b, _)| total < b) {
                    best = Some((total, g.id));
                }
            }
            if let Some((_, id)) = best {
                deployment.gnbs[id].attached_count += 1;
            }
        }
    }

    let links = LinkTable::draw(&deployment, &radio, &params, rng);
    Ok(World { deployment, links })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionResult<T> {
    pub index: u64,
    pub node_count: usize,
    /// One entry per configured policy, in config order.
    pub results: Vec<PathResult<T>>,
    pub oracle: Option<PathResult<T>>,
}

/// Runs every configured policy on the same fresh realization.
pub fn run_repetition<T: Real>(cfg: &SimConfig, rep_index: u64) -> Result<RepetitionResult<T>> {
    let mut rng = repetition_rng(cfg.master_seed, rep_index);
    let world = sample_world::<T, _>(cfg, &mut rng)?;
    evaluate_world(cfg, rep_index, &world)
}

pub fn evaluate_world<T: Real>(cfg: &SimConfig, rep_index: u64, world: &World<T>) -> Result<RepetitionResult<T>> {
    let rules = cfg.path_rules::<T>();
    let origin = world.deployment.origin_id;
    let results = cfg
        .policies
        .iter()
        .map(|p| {
            let wbf = cast_wbf(&p.wbf);
            build_path(origin, p.kind, &wbf, &world.deployment, &world.links, &rules)
        })
        .collect::<Result<Vec<_>>>()?;
    let oracle = cfg
        .oracle_enabled
        .then(|| widest_path_oracle(&world.deployment, &world.links, origin, rules.snr_threshold_db));
    Ok(RepetitionResult {
        index: rep_index,
        node_count: world.deployment.len(),
        results,
        oracle,
    })
}

fn cast_wbf<T: Real>(w: &WbfConfig<f64>) -> WbfConfig<T> {
    WbfConfig {
        kind: w.kind,
        hop_threshold: w.hop_threshold,
        poly_degree: T::lit(w.poly_degree),
        exp_base: T::lit(w.exp_base),
        snr_gap_db: T::lit(w.snr_gap_db),
        hysteresis_db: T::lit(w.hysteresis_db),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricStats {
    pub mean: f64,
    pub median: f64,
    pub p95: f64,
}

impl MetricStats {
    fn of(cdf: &EmpiricalCdf<f64>) -> Self {
        Self {
            mean: cdf.mean(),
            median: cdf.median(),
            p95: cdf.quantile(0.95),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySummary {
    pub label: String,
    pub policy: PolicyKind,
    pub wbf: WbfConfig<f64>,
    pub repetitions: usize,
    pub successes: usize,
    pub no_candidate: usize,
    pub max_hops: usize,
    pub failure_probability: f64,
    pub hops: Option<MetricStats>,
    pub bottleneck_snr_db: Option<MetricStats>,
    /// Mean of oracle minus policy bottleneck, over repetitions where both
    /// succeed.
    pub mean_oracle_gap_db: Option<f64>,
    #[serde(skip)]
    pub hop_cdf: Option<EmpiricalCdf<f64>>,
    #[serde(skip)]
    pub snr_cdf: Option<EmpiricalCdf<f64>>,
}

impl PolicySummary {
    pub fn failures(&self) -> usize {
        self.no_candidate + self.max_hops
    }

    /// `P(hops <= h)` over successful paths.
    pub fn hop_cdf_at(&self, h: usize) -> Option<f64> {
        self.hop_cdf.as_ref().map(|c| c.eval(h as f64))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub successes: usize,
    pub failure_probability: f64,
    pub hops: Option<MetricStats>,
    pub bottleneck_snr_db: Option<MetricStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub repetitions: usize,
    pub policies: Vec<PolicySummary>,
    pub oracle: Option<OracleSummary>,
}

fn metric_cdfs<'a, T: Real + 'a>(
    paths: impl Iterator<Item = &'a PathResult<T>>,
) -> (Option<EmpiricalCdf<f64>>, Option<EmpiricalCdf<f64>>) {
    let (hops, snrs): (Vec<f64>, Vec<f64>) = paths
        .filter(|p| p.is_success())
        .map(|p| {
            (
                p.hop_count() as f64,
                p.bottleneck_snr_db.expect("successful path has a link").as_f64(),
            )
        })
        .unzip();
    (EmpiricalCdf::new(hops).ok(), EmpiricalCdf::new(snrs).ok())
}

/// Folds per-repetition results into per-policy statistics. The result does
/// not depend on the order of `reps`.
pub fn aggregate<T: Real>(cfg: &SimConfig, reps: &[RepetitionResult<T>]) -> Result<CampaignSummary> {
    if reps.is_empty() {
        return Err(Error::InvalidArgument("no repetitions to aggregate".into()));
    }
    let mut ordered: Vec<&RepetitionResult<T>> = reps.iter().collect();
    ordered.sort_by_key(|r| r.index);
    let n = ordered.len();

    let policies = cfg
        .policies
        .iter()
        .enumerate()
        .map(|(k, spec)| {
            let paths = || ordered.iter().map(move |r| &r.results[k]);
            let count = |o: Outcome| paths().filter(|p| p.outcome == o).count();
            let (hop_cdf, snr_cdf) = metric_cdfs(paths());
            let successes = count(Outcome::Success);
            let gaps: Vec<f64> = ordered
                .iter()
                .filter_map(|r| {
                    let p = &r.results[k];
                    let o = r.oracle.as_ref()?;
                    (p.is_success() && o.is_success()).then(|| {
                        (o.bottleneck_snr_db.expect("success") - p.bottleneck_snr_db.expect("success"))
                            .as_f64()
                    })
                })
                .collect();
            PolicySummary {
                label: spec.label.clone(),
                policy: spec.kind,
                wbf: spec.wbf,
                repetitions: n,
                successes,
                no_candidate: count(Outcome::NoCandidate),
                max_hops: count(Outcome::MaxHops),
                failure_probability: (n - successes) as f64 / n as f64,
                hops: hop_cdf.as_ref().map(MetricStats::of),
                bottleneck_snr_db: snr_cdf.as_ref().map(MetricStats::of),
                mean_oracle_gap_db: (!gaps.is_empty())
                    .then(|| gaps.iter().sum::<f64>() / gaps.len() as f64),
                hop_cdf,
                snr_cdf,
            }
        })
        .collect();

    let oracle = ordered.iter().all(|r| r.oracle.is_some()).then(|| {
        let (hop_cdf, snr_cdf) = metric_cdfs(ordered.iter().filter_map(|r| r.oracle.as_ref()));
        let successes = hop_cdf.as_ref().map_or(0, |c| c.len());
        OracleSummary {
            successes,
            failure_probability: (n - successes) as f64 / n as f64,
            hops: hop_cdf.as_ref().map(MetricStats::of),
            bottleneck_snr_db: snr_cdf.as_ref().map(MetricStats::of),
        }
    });

    Ok(CampaignSummary {
        repetitions: n,
        policies,
        oracle,
    })
}

#[derive(Debug, Clone)]
pub struct Campaign<T> {
    pub repetitions: Vec<RepetitionResult<T>>,
    pub summary: CampaignSummary,
}

/// Runs all repetitions on `workers` threads (0 = rayon default) and
/// aggregates them. Output is independent of the worker count.
pub fn run_campaign<T: Real>(cfg: &SimConfig, workers: usize) -> Result<Campaign<T>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let repetitions = pool.install(|| {
        (0..cfg.repetitions as u64)
            .into_par_iter()
            .map(|i| run_repetition::<T>(cfg, i))
            .collect::<Result<Vec<_>>>()
    })?;
    let summary = aggregate(cfg, &repetitions)?;
    Ok(Campaign {
        repetitions,
        summary,
    })
}
