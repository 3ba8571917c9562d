//! Monte Carlo evaluation of distributed backhaul path selection in mmWave
//! integrated access and backhaul (IAB) networks.
//!
//! Each repetition drops gNBs as a Poisson point process, marks a fraction of
//! them as wired donors, draws a 28 GHz LOS/NLOS/outage channel with sectorized
//! UPA beamforming, and lets an IAB node find its way to a donor hop by hop
//! under one of four local policies (HQF, WF, PA, MLR), optionally biased
//! towards wired gNBs. Hop counts and bottleneck SNRs are aggregated into
//! empirical CDFs and compared against a centralized widest-path benchmark.
//!
//! The geometry, channel and policy code is generic over the scalar type
//! ([`Real`], implemented for `f32` and `f64`); the aliases below fix it to
//! `f64`, which is what the campaign driver and file formats use.

pub mod cdf;
pub mod channel;
pub mod config;
pub mod error;
pub mod geometry;
pub mod num;
pub mod oracle;
pub mod output;
pub mod policy;
pub mod simulate;

pub use error::{Error, Result};
pub use num::Real;

pub use config::{parse_config_file, parse_config_str, ConfigFile};
pub use output::{write_results, ResultBundle};
pub use policy::{Outcome, PolicyKind, WbfKind};
pub use simulate::{run_campaign, run_repetition, CampaignSummary, PolicySpec, SimConfig};

pub type Position = geometry::Position<f64>;
pub type Region = geometry::Region<f64>;
pub type GnbNode = geometry::GnbNode<f64>;
pub type Deployment = geometry::Deployment<f64>;
pub type RadioConfig = channel::RadioConfig<f64>;
pub type ChannelParams = channel::ChannelParams<f64>;
pub type LinkState = channel::LinkState<f64>;
pub type LinkTable = channel::LinkTable<f64>;
pub type WbfConfig = policy::WbfConfig<f64>;
pub type Candidate = policy::Candidate<f64>;
pub type PathResult = policy::PathResult<f64>;
pub type EmpiricalCdf = cdf::EmpiricalCdf<f64>;
pub type Campaign = simulate::Campaign<f64>;

/// Single-precision variants.
pub mod f32 {
    pub type Position = crate::geometry::Position<f32>;
    pub type Deployment = crate::geometry::Deployment<f32>;
    pub type LinkState = crate::channel::LinkState<f32>;
    pub type LinkTable = crate::channel::LinkTable<f32>;
    pub type WbfConfig = crate::policy::WbfConfig<f32>;
    pub type PathResult = crate::policy::PathResult<f32>;
    pub type Campaign = crate::simulate::Campaign<f32>;
}
