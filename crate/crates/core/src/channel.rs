//! Statistical 28 GHz large-scale channel (three-state LOS/NLOS/outage
//! pathloss with lognormal shadowing) combined with a sectorized UPA
//! beamforming gain, producing symmetric gNB-to-gNB link SNRs.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Deployment, GnbNode};
use crate::num::{wrap_angle, Real};

/// Thermal noise density at 290 K, dBm/Hz.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioConfig<T> {
    pub carrier_ghz: T,
    pub bandwidth_hz: T,
    pub tx_power_dbm: T,
    pub noise_figure_db: T,
    /// Elements per UPA, a perfect square (`sqrt(M) x sqrt(M)`).
    pub array_elements: u32,
    pub sectors: u32,
    /// Links below this SNR are not usable for backhaul.
    pub snr_threshold_db: T,
    /// Gain outside the serving sector, and at array-factor nulls.
    pub floor_gain_dbi: T,
}

impl<T: Real> Default for RadioConfig<T> {
    fn default() -> Self {
        Self {
            carrier_ghz: T::lit(28.0),
            bandwidth_hz: T::lit(400e6),
            tx_power_dbm: T::lit(30.0),
            noise_figure_db: T::lit(5.0),
            array_elements: 64,
            sectors: 3,
            snr_threshold_db: T::lit(5.0),
            floor_gain_dbi: T::lit(-10.0),
        }
    }
}

impl<T: Real> RadioConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_hz > T::zero() && self.bandwidth_hz.is_finite()) {
            return Err(Error::config("B_hz", "bandwidth must be positive"));
        }
        if !(self.carrier_ghz > T::zero()) {
            return Err(Error::config("fc_ghz", "carrier frequency must be positive"));
        }
        if self.array_elements == 0 || !is_perfect_square(self.array_elements) {
            return Err(Error::config("M", "array size must be a positive perfect square"));
        }
        if self.sectors == 0 {
            return Err(Error::config("S", "need at least one sector"));
        }
        for (key, v) in [
            ("ptx_dbm", self.tx_power_dbm),
            ("nf_db", self.noise_figure_db),
            ("gamma_th_db", self.snr_threshold_db),
            ("floor_gain_dbi", self.floor_gain_dbi),
        ] {
            if !v.is_finite() {
                return Err(Error::config(key, "must be finite"));
            }
        }
        Ok(())
    }

    pub fn noise_power_dbm(&self) -> T {
        noise_power_dbm(self.bandwidth_hz, self.noise_figure_db)
    }

    /// Gain with the beam steered exactly at the target, `10 log10 M`.
    pub fn aligned_gain_dbi(&self) -> T {
        T::lit(10.0) * T::from_u32(self.array_elements).expect("u32 fits").log10()
    }

    pub fn cast<U: Real>(&self) -> RadioConfig<U> {
        RadioConfig {
            carrier_ghz: U::lit(self.carrier_ghz.as_f64()),
            bandwidth_hz: U::lit(self.bandwidth_hz.as_f64()),
            tx_power_dbm: U::lit(self.tx_power_dbm.as_f64()),
            noise_figure_db: U::lit(self.noise_figure_db.as_f64()),
            array_elements: self.array_elements,
            sectors: self.sectors,
            snr_threshold_db: U::lit(self.snr_threshold_db.as_f64()),
            floor_gain_dbi: U::lit(self.floor_gain_dbi.as_f64()),
        }
    }
}

fn is_perfect_square(m: u32) -> bool {
    let r = (m as f64).sqrt().round() as u32;
    r * r == m
}

/// Large-scale channel constants. Defaults are the 28 GHz measurement fit
/// (floating intercept, three-state blockage).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams<T> {
    pub los_alpha_db: T,
    pub los_beta: T,
    pub los_sigma_db: T,
    pub nlos_alpha_db: T,
    pub nlos_beta: T,
    pub nlos_sigma_db: T,
    /// Outage slope, 1/m.
    pub outage_a: T,
    pub outage_b: T,
    /// LOS decay rate, 1/m.
    pub los_a: T,
    /// Optional extra per-link lognormal perturbation; 0 disables it.
    pub fading_sigma_db: T,
}

impl<T: Real> Default for ChannelParams<T> {
    fn default() -> Self {
        Self {
            los_alpha_db: T::lit(61.4),
            los_beta: T::lit(2.0),
            los_sigma_db: T::lit(5.8),
            nlos_alpha_db: T::lit(72.0),
            nlos_beta: T::lit(2.92),
            nlos_sigma_db: T::lit(8.7),
            outage_a: T::lit(1.0 / 30.0),
            outage_b: T::lit(5.2),
            los_a: T::lit(1.0 / 67.1),
            fading_sigma_db: T::zero(),
        }
    }
}

impl<T: Real> ChannelParams<T> {
    pub fn validate(&self) -> Result<()> {
        for (key, v) in [
            ("los_sigma_db", self.los_sigma_db),
            ("nlos_sigma_db", self.nlos_sigma_db),
            ("outage_a", self.outage_a),
            ("los_a", self.los_a),
            ("fading_sigma_db", self.fading_sigma_db),
        ] {
            if !(v >= T::zero() && v.is_finite()) {
                return Err(Error::config(key, "must be finite and nonnegative"));
            }
        }
        for (key, v) in [
            ("los_alpha_db", self.los_alpha_db),
            ("los_beta", self.los_beta),
            ("nlos_alpha_db", self.nlos_alpha_db),
            ("nlos_beta", self.nlos_beta),
            ("outage_b", self.outage_b),
        ] {
            if !v.is_finite() {
                return Err(Error::config(key, "must be finite"));
            }
        }
        Ok(())
    }

    pub fn cast<U: Real>(&self) -> ChannelParams<U> {
        let c = |v: T| U::lit(v.as_f64());
        ChannelParams {
            los_alpha_db: c(self.los_alpha_db),
            los_beta: c(self.los_beta),
            los_sigma_db: c(self.los_sigma_db),
            nlos_alpha_db: c(self.nlos_alpha_db),
            nlos_beta: c(self.nlos_beta),
            nlos_sigma_db: c(self.nlos_sigma_db),
            outage_a: c(self.outage_a),
            outage_b: c(self.outage_b),
            los_a: c(self.los_a),
            fading_sigma_db: c(self.fading_sigma_db),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LosState {
    Los,
    Nlos,
    Outage,
}

/// Quality of the (symmetric) link between two gNBs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkState<T> {
    pub src: usize,
    pub dst: usize,
    pub distance: T,
    pub los: LosState,
    pub pathloss_db: T,
    pub shadowing_db: T,
    pub tx_gain_dbi: T,
    pub rx_gain_dbi: T,
    pub snr_db: T,
}

impl<T: Real> LinkState<T> {
    /// Closes the link budget. Outage links get `-inf` SNR.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        src: usize,
        dst: usize,
        distance: T,
        los: LosState,
        pathloss_db: T,
        shadowing_db: T,
        tx_gain_dbi: T,
        rx_gain_dbi: T,
        radio: &RadioConfig<T>,
    ) -> Self {
        let snr_db = match los {
            LosState::Outage => T::neg_infinity(),
            _ => {
                radio.tx_power_dbm + tx_gain_dbi + rx_gain_dbi
                    - pathloss_db
                    - shadowing_db
                    - radio.noise_power_dbm()
            }
        };
        Self {
            src,
            dst,
            distance,
            los,
            pathloss_db,
            shadowing_db,
            tx_gain_dbi,
            rx_gain_dbi,
            snr_db,
        }
    }

    /// Same link seen from the other endpoint.
    pub fn reversed(&self) -> Self {
        Self {
            src: self.dst,
            dst: self.src,
            tx_gain_dbi: self.rx_gain_dbi,
            rx_gain_dbi: self.tx_gain_dbi,
            ..*self
        }
    }

    /// `snr + PL + shadowing + noise - P_TX - G_tx - G_rx`; zero for every
    /// non-outage link.
    pub fn budget_residual(&self, radio: &RadioConfig<T>) -> T {
        self.snr_db + self.pathloss_db + self.shadowing_db + radio.noise_power_dbm()
            - radio.tx_power_dbm
            - self.tx_gain_dbi
            - self.rx_gain_dbi
    }
}

/// Thermal noise power over `bandwidth_hz` with the given noise figure.
pub fn noise_power_dbm<T: Real>(bandwidth_hz: T, noise_figure_db: T) -> T {
    T::lit(THERMAL_NOISE_DBM_PER_HZ) + T::lit(10.0) * bandwidth_hz.log10() + noise_figure_db
}

/// `(P(LOS), P(NLOS), P(OUTAGE))` at distance `d` meters.
pub fn los_probabilities<T: Real>(d: T, params: &ChannelParams<T>) -> (T, T, T) {
    let one = T::one();
    let p_out = (one - (-params.outage_a * d + params.outage_b).exp()).max(T::zero());
    let p_los = (one - p_out) * (-params.los_a * d).exp();
    let p_nlos = (one - p_out - p_los).max(T::zero());
    (p_los, p_nlos, p_out)
}

pub fn draw_los_state<T: Real, R: Rng + ?Sized>(
    d: T,
    params: &ChannelParams<T>,
    rng: &mut R,
) -> LosState {
    let (p_los, _, p_out) = los_probabilities(d, params);
    let u = rng.random::<f64>();
    if u < p_out.as_f64() {
        LosState::Outage
    } else if u < (p_out + p_los).as_f64() {
        LosState::Los
    } else {
        LosState::Nlos
    }
}

/// Deterministic part `alpha + 10 beta log10(d)`, with `d` clamped to 1 m.
/// Outage is `+inf`.
pub fn mean_pathloss_db<T: Real>(d: T, los: LosState, params: &ChannelParams<T>) -> T {
    let d = d.max(T::one());
    let (alpha, beta) = match los {
        LosState::Los => (params.los_alpha_db, params.los_beta),
        LosState::Nlos => (params.nlos_alpha_db, params.nlos_beta),
        LosState::Outage => return T::infinity(),
    };
    alpha + T::lit(10.0) * beta * d.log10()
}

/// Pathloss plus one shadowing draw, returned as `(pathloss, shadowing)`.
pub fn pathloss_db<T: Real, R: Rng + ?Sized>(
    d: T,
    los: LosState,
    params: &ChannelParams<T>,
    rng: &mut R,
) -> (T, T) {
    let sigma = match los {
        LosState::Los => params.los_sigma_db,
        LosState::Nlos => params.nlos_sigma_db,
        LosState::Outage => return (T::infinity(), T::zero()),
    };
    let z: f64 = StandardNormal.sample(rng);
    (mean_pathloss_db(d, los, params), sigma * T::lit(z))
}

/// Normalized azimuth array factor of `n` half-wavelength-spaced elements
/// steered to `steer`, evaluated at `actual` (both relative to broadside).
pub fn array_factor<T: Real>(n: u32, steer: T, actual: T) -> T {
    let psi = T::PI() * (actual.sin() - steer.sin());
    let (mut re, mut im) = (T::zero(), T::zero());
    for m in 0..n {
        let phase = psi * T::from_u32(m).expect("u32 fits");
        re = re + phase.cos();
        im = im + phase.sin();
    }
    let nf = T::from_u32(n).expect("u32 fits");
    ((re * re + im * im) / (nf * nf)).min(T::one())
}

/// Gain of one UPA sector. Angles are absolute azimuths; the array factor
/// uses `sqrt(M)` effective elements and is normalized so alignment gives
/// `10 log10 M`. Outside the sector, or at a null, the floor gain applies.
pub fn upa_gain_db<T: Real>(
    elements: u32,
    boresight: T,
    halfwidth: T,
    steer: T,
    actual: T,
    floor_dbi: T,
) -> T {
    let off = wrap_angle(actual - boresight);
    if off.abs() > halfwidth {
        return floor_dbi;
    }
    let side = (elements as f64).sqrt().round() as u32;
    let af = array_factor(side, wrap_angle(steer - boresight), off);
    let m = T::from_u32(elements).expect("u32 fits");
    let gain = T::lit(10.0) * (m * af).log10();
    if gain.is_finite() {
        gain.max(floor_dbi)
    } else {
        floor_dbi
    }
}

/// Gain of the sector whose boresight is closest to `bearing`, beam steered
/// exactly at `bearing`.
pub fn best_sector_gain_db<T: Real>(node: &GnbNode<T>, bearing: T, radio: &RadioConfig<T>) -> T {
    let halfwidth = node.sector_halfwidth();
    node.sector_boresights
        .iter()
        .min_by(|a, b| {
            wrap_angle(bearing - **a)
                .abs()
                .partial_cmp(&wrap_angle(bearing - **b).abs())
                .expect("finite angles")
        })
        .map(|&bs| {
            upa_gain_db(
                radio.array_elements,
                bs,
                halfwidth,
                bearing,
                bearing,
                radio.floor_gain_dbi,
            )
        })
        .unwrap_or(radio.floor_gain_dbi)
}

/// Draws the channel between `i` and `j`. One draw serves both directions.
pub fn link_state<T: Real, R: Rng + ?Sized>(
    i: &GnbNode<T>,
    j: &GnbNode<T>,
    radio: &RadioConfig<T>,
    params: &ChannelParams<T>,
    rng: &mut R,
) -> LinkState<T> {
    debug_assert_ne!(i.id, j.id);
    let d = i.position.distance(&j.position);
    let los = draw_los_state(d, params, rng);
    let (pl, mut shadow) = pathloss_db(d, los, params, rng);
    if los != LosState::Outage && params.fading_sigma_db > T::zero() {
        let z: f64 = StandardNormal.sample(rng);
        shadow = shadow + params.fading_sigma_db * T::lit(z);
    }
    let tx_gain = best_sector_gain_db(i, i.position.bearing_to(&j.position), radio);
    let rx_gain = best_sector_gain_db(j, j.position.bearing_to(&i.position), radio);
    LinkState::assemble(i.id, j.id, d, los, pl, shadow, tx_gain, rx_gain, radio)
}

/// All pairwise links of one deployment.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkTable<T> {
    n: usize,
    snr: Vec<T>,
    states: Vec<LinkState<T>>,
}

impl<T: Real> LinkTable<T> {
    /// Draws every unordered pair `(i, j)`, `i < j`, in row-major order.
    pub fn draw<R: Rng + ?Sized>(
        deployment: &Deployment<T>,
        radio: &RadioConfig<T>,
        params: &ChannelParams<T>,
        rng: &mut R,
    ) -> Self {
        let n = deployment.len();
        let mut states = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                states.push(link_state(deployment.node(i), deployment.node(j), radio, params, rng));
            }
        }
        Self::from_states(n, states)
    }

    /// Builds a table from explicit upper-triangle states (`src < dst`).
    pub fn from_states(n: usize, states: Vec<LinkState<T>>) -> Self {
        let mut snr = vec![T::neg_infinity(); n * n];
        for s in &states {
            snr[s.src * n + s.dst] = s.snr_db;
            snr[s.dst * n + s.src] = s.snr_db;
        }
        Self { n, snr, states }
    }

    /// Table with only SNRs (no underlying channel record); pairs missing
    /// from `links` are in outage.
    pub fn from_snrs(n: usize, links: &[(usize, usize, T)]) -> Self {
        let mut snr = vec![T::neg_infinity(); n * n];
        for &(a, b, s) in links {
            snr[a * n + b] = s;
            snr[b * n + a] = s;
        }
        Self {
            n,
            snr,
            states: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn snr(&self, i: usize, j: usize) -> T {
        self.snr[i * self.n + j]
    }

    pub fn states(&self) -> &[LinkState<T>] {
        &self.states
    }

    /// Directed view `i -> j`, if the table keeps channel records.
    pub fn state(&self, i: usize, j: usize) -> Option<LinkState<T>> {
        self.states
            .iter()
            .find(|s| (s.src == i && s.dst == j) || (s.src == j && s.dst == i))
            .map(|s| if s.src == i { *s } else { s.reversed() })
    }
}

/// Shannon rate `B / max(N, 1) * log2(1 + snr)`, SNR given in dB.
pub fn shannon_rate<T: Real>(bandwidth_hz: T, snr_db: T, n_attached: usize) -> T {
    let lin = crate::num::db_to_linear(snr_db);
    let share = T::from_usize_lossy(n_attached.max(1));
    bandwidth_hz / share * (T::one() + lin).log2()
}
