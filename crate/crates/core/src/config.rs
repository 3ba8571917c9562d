//! TOML experiment description.
//!
//! ```toml
//! [deployment]
//! lambda_g = 30          # gNB / km^2
//! p_w = 0.3
//! lambda_ue = 100
//!
//! [radio]
//! M = 64
//! S = 3
//! B_hz = 400e6
//!
//! [[policies]]
//! policy = "HQF"
//! wbf = { preset = "aggressive_poly" }
//!
//! [run]
//! repetitions = 2000
//! seed = 7
//! ```
//!
//! Every key is optional; missing keys take the defaults of [`SimConfig`].
//! Unknown keys are rejected.

use std::fmt;
use std::path::Path;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::channel::{ChannelParams, RadioConfig};
use crate::error::{Error, Result};
use crate::policy::{PolicyKind, WbfConfig, WbfKind};
use crate::simulate::{PolicySpec, SimConfig};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deployment: Option<DeploymentSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radio: Option<RadioSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policies: Option<Vec<PolicySection>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeploymentSection {
    pub lambda_g: Option<f64>,
    pub p_w: Option<f64>,
    pub lambda_ue: Option<f64>,
    pub region_width_m: Option<f64>,
    pub region_height_m: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    #[serde(rename = "M")]
    pub m: Option<u32>,
    #[serde(rename = "S")]
    pub s: Option<u32>,
    #[serde(rename = "B_hz")]
    pub b_hz: Option<f64>,
    pub fc_ghz: Option<f64>,
    pub ptx_dbm: Option<f64>,
    pub nf_db: Option<f64>,
    pub gamma_th_db: Option<f64>,
    pub floor_gain_dbi: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub los_alpha_db: Option<f64>,
    pub los_beta: Option<f64>,
    pub los_sigma_db: Option<f64>,
    pub nlos_alpha_db: Option<f64>,
    pub nlos_beta: Option<f64>,
    pub nlos_sigma_db: Option<f64>,
    pub outage_a: Option<f64>,
    pub outage_b: Option<f64>,
    pub los_a: Option<f64>,
    pub fading_sigma_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    pub policy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wbf: Option<WbfSection>,
}

/// Bias parameters. `preset` supplies a base; explicit fields override it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WbfSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub kind: Option<WbfKind>,
    pub n_ht: Option<u32>,
    pub k: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_gap_db: Option<f64>,
    pub gamma_h_db: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub repetitions: Option<usize>,
    pub seed: Option<Seed>,
    pub max_hops: Option<usize>,
    pub oracle: Option<bool>,
    pub pa_fallback: Option<bool>,
}

/// 64-bit seed. TOML integers are signed, so seeds above `i64::MAX` are
/// written as strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seed(pub u64);

impl Serialize for Seed {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match i64::try_from(self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Seed {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct SeedVisitor;
        impl Visitor<'_> for SeedVisitor {
            type Value = Seed;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a nonnegative 64-bit integer")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Seed, E> {
                u64::try_from(v).map(Seed).map_err(|_| E::custom("seed must be nonnegative"))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Seed, E> {
                Ok(Seed(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Seed, E> {
                v.parse().map(Seed).map_err(E::custom)
            }
        }
        d.deserialize_any(SeedVisitor)
    }
}

impl WbfSection {
    fn resolve(&self, index: usize) -> Result<WbfConfig<f64>> {
        let key = |k: &str| format!("policies[{index}].wbf.{k}");
        let mut w = match &self.preset {
            Some(name) => WbfConfig::preset(name).map_err(|e| match e {
                Error::InvalidConfig { reason, .. } => Error::config(key("preset"), reason),
                other => other,
            })?,
            None => WbfConfig::none(),
        };
        if let Some(kind) = self.kind {
            w.kind = kind;
        }
        if let Some(v) = self.n_ht {
            w.hop_threshold = v;
        }
        if let Some(v) = self.k {
            w.poly_degree = v;
        }
        if let Some(v) = self.gamma {
            w.exp_base = v;
        }
        if let Some(v) = self.gamma_gap_db {
            w.snr_gap_db = v;
        }
        if let Some(v) = self.gamma_h_db {
            w.hysteresis_db = v;
        }
        Ok(w)
    }

    fn explicit(w: &WbfConfig<f64>) -> Self {
        Self {
            preset: None,
            kind: Some(w.kind),
            n_ht: Some(w.hop_threshold),
            k: Some(w.poly_degree),
            gamma: Some(w.exp_base),
            gamma_gap_db: Some(w.snr_gap_db),
            gamma_h_db: Some(w.hysteresis_db),
        }
    }
}

impl ConfigFile {
    /// Applies defaults and validates.
    pub fn to_sim_config(&self) -> Result<SimConfig> {
        let mut cfg = SimConfig::default();

        if let Some(d) = &self.deployment {
            set(&mut cfg.lambda_g, d.lambda_g);
            set(&mut cfg.p_w, d.p_w);
            set(&mut cfg.lambda_ue, d.lambda_ue);
            set(&mut cfg.region.width, d.region_width_m);
            set(&mut cfg.region.height, d.region_height_m);
        }
        if let Some(r) = &self.radio {
            let radio: &mut RadioConfig<f64> = &mut cfg.radio;
            set(&mut radio.array_elements, r.m);
            set(&mut radio.sectors, r.s);
            set(&mut radio.bandwidth_hz, r.b_hz);
            set(&mut radio.carrier_ghz, r.fc_ghz);
            set(&mut radio.tx_power_dbm, r.ptx_dbm);
            set(&mut radio.noise_figure_db, r.nf_db);
            set(&mut radio.snr_threshold_db, r.gamma_th_db);
            set(&mut radio.floor_gain_dbi, r.floor_gain_dbi);
        }
        if let Some(c) = &self.channel {
            let ch: &mut ChannelParams<f64> = &mut cfg.channel;
            set(&mut ch.los_alpha_db, c.los_alpha_db);
            set(&mut ch.los_beta, c.los_beta);
            set(&mut ch.los_sigma_db, c.los_sigma_db);
            set(&mut ch.nlos_alpha_db, c.nlos_alpha_db);
            set(&mut ch.nlos_beta, c.nlos_beta);
            set(&mut ch.nlos_sigma_db, c.nlos_sigma_db);
            set(&mut ch.outage_a, c.outage_a);
            set(&mut ch.outage_b, c.outage_b);
            set(&mut ch.los_a, c.los_a);
            set(&mut ch.fading_sigma_db, c.fading_sigma_db);
        }
        if let Some(policies) = &self.policies {
            cfg.policies = policies
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let kind: PolicyKind = p.policy.parse().map_err(|e| match e {
                        Error::InvalidConfig { reason, .. } => {
                            Error::config(format!("policies[{i}].policy"), reason)
                        }
                        other => other,
                    })?;
                    let wbf = p.wbf.as_ref().map(|w| w.resolve(i)).transpose()?.unwrap_or_else(WbfConfig::none);
                    let mut spec = PolicySpec::new(kind, wbf);
                    if let Some(label) = &p.label {
                        spec.label = label.clone();
                    }
                    Ok(spec)
                })
                .collect::<Result<Vec<_>>>()?;
        }
        if let Some(r) = &self.run {
            set(&mut cfg.repetitions, r.repetitions);
            set(&mut cfg.master_seed, r.seed.map(|s| s.0));
            set(&mut cfg.max_hops, r.max_hops);
            set(&mut cfg.oracle_enabled, r.oracle);
            set(&mut cfg.pa_fallback, r.pa_fallback);
        }

        cfg.validate()?;
        Ok(cfg)
    }

    /// Fully explicit document equivalent to `cfg`.
    pub fn echo(cfg: &SimConfig) -> Self {
        let radio = &cfg.radio;
        let ch = &cfg.channel;
        Self {
            deployment: Some(DeploymentSection {
                lambda_g: Some(cfg.lambda_g),
                p_w: Some(cfg.p_w),
                lambda_ue: Some(cfg.lambda_ue),
                region_width_m: Some(cfg.region.width),
                region_height_m: Some(cfg.region.height),
            }),
            radio: Some(RadioSection {
                m: Some(radio.array_elements),
                s: Some(radio.sectors),
                b_hz: Some(radio.bandwidth_hz),
                fc_ghz: Some(radio.carrier_ghz),
                ptx_dbm: Some(radio.tx_power_dbm),
                nf_db: Some(radio.noise_figure_db),
                gamma_th_db: Some(radio.snr_threshold_db),
                floor_gain_dbi: Some(radio.floor_gain_dbi),
            }),
            channel: Some(ChannelSection {
                los_alpha_db: Some(ch.los_alpha_db),
                los_beta: Some(ch.los_beta),
                los_sigma_db: Some(ch.los_sigma_db),
                nlos_alpha_db: Some(ch.nlos_alpha_db),
                nlos_beta: Some(ch.nlos_beta),
                nlos_sigma_db: Some(ch.nlos_sigma_db),
                outage_a: Some(ch.outage_a),
                outage_b: Some(ch.outage_b),
                los_a: Some(ch.los_a),
                fading_sigma_db: Some(ch.fading_sigma_db),
            }),
            policies: Some(
                cfg.policies
                    .iter()
                    .map(|p| PolicySection {
                        policy: p.kind.name().to_string(),
                        label: Some(p.label.clone()),
                        wbf: Some(WbfSection::explicit(&p.wbf)),
                    })
                    .collect(),
            ),
            run: Some(RunSection {
                repetitions: Some(cfg.repetitions),
                seed: Some(Seed(cfg.master_seed)),
                max_hops: Some(cfg.max_hops),
                oracle: Some(cfg.oracle_enabled),
                pa_fallback: Some(cfg.pa_fallback),
            }),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

pub fn parse_config_str(text: &str) -> Result<SimConfig> {
    let doc: ConfigFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_sim_config()
}

pub fn parse_config_file(path: impl AsRef<Path>) -> Result<SimConfig> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::io(path.as_ref(), e))?;
    parse_config_str(&text)
}

/// TOML text that parses back to `cfg`.
pub fn echo_toml(cfg: &SimConfig) -> Result<String> {
    ConfigFile::echo(cfg).to_toml()
}
