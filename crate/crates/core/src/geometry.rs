//! Planar deployments: Poisson sampling of gNB sites, wired/IAB role
//! assignment and the spatial predicates used by the position-aware policy.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;

/// Upper bound on role redraws before a deployment is declared degenerate.
const MAX_ROLE_DRAWS: usize = 10_000;

/// Rectangular simulation area in meters, anchored at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region<T> {
    pub width: T,
    pub height: T,
}

impl<T: Real> Region<T> {
    pub fn new(width: T, height: T) -> Result<Self> {
        if !(width > T::zero() && width.is_finite()) {
            return Err(Error::config("region_width_m", "must be a positive finite length"));
        }
        if !(height > T::zero() && height.is_finite()) {
            return Err(Error::config("region_height_m", "must be a positive finite length"));
        }
        Ok(Self { width, height })
    }

    /// 1 km x 1 km.
    pub fn square_km() -> Self {
        Self {
            width: T::lit(1000.0),
            height: T::lit(1000.0),
        }
    }

    pub fn area_km2(&self) -> T {
        self.width * self.height / T::lit(1e6)
    }

    pub fn center(&self) -> Position<T> {
        Position::new(self.width / T::lit(2.0), self.height / T::lit(2.0))
    }

    pub fn contains(&self, p: Position<T>) -> bool {
        p.x >= T::zero() && p.x <= self.width && p.y >= T::zero() && p.y <= self.height
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Position<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Self) -> T {
        (other.x - self.x).hypot(other.y - self.y)
    }

    pub fn distance_sq(&self, other: &Self) -> T {
        let dx = other.x - self.x;
        let dy = other.y - self.y;
        dx * dx + dy * dy
    }

    /// Azimuth of `other` seen from `self`, in radians.
    pub fn bearing_to(&self, other: &Self) -> T {
        (other.y - self.y).atan2(other.x - self.x)
    }

    /// Planar dot product of `(a - self)` and `(b - self)`.
    pub fn projection(&self, a: &Self, b: &Self) -> T {
        (a.x - self.x) * (b.x - self.x) + (a.y - self.y) * (b.y - self.y)
    }
}

/// Anything with a planar position.
pub trait Located<T> {
    fn position(&self) -> Position<T>;
}

impl<T: Copy> Located<T> for Position<T> {
    fn position(&self) -> Position<T> {
        *self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnbNode<T> {
    pub id: usize,
    pub position: Position<T>,
    /// Donor with fiber backhaul (`true`) or IAB relay (`false`).
    pub is_wired: bool,
    /// One boresight per sector, evenly spaced by `2*pi/S`.
    pub sector_boresights: Vec<T>,
    /// UEs plus IAB children attached to this gNB.
    pub attached_count: usize,
}

impl<T: Copy> Located<T> for GnbNode<T> {
    fn position(&self) -> Position<T> {
        self.position
    }
}

impl<T: Real> GnbNode<T> {
    /// Half of the angular width covered by one sector.
    pub fn sector_halfwidth(&self) -> T {
        T::PI() / T::from_usize_lossy(self.sector_boresights.len().max(1))
    }
}

/// One realized topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deployment<T> {
    pub region: Region<T>,
    /// Indexed by id: `gnbs[k].id == k`.
    pub gnbs: Vec<GnbNode<T>>,
    pub ue_positions: Vec<Position<T>>,
    /// The IAB node whose backhaul path is evaluated.
    pub origin_id: usize,
}

impl<T: Real> Deployment<T> {
    pub fn node(&self, id: usize) -> &GnbNode<T> {
        &self.gnbs[id]
    }

    pub fn len(&self) -> usize {
        self.gnbs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gnbs.is_empty()
    }

    pub fn wired_count(&self) -> usize {
        self.gnbs.iter().filter(|g| g.is_wired).count()
    }
}

/// Draws a homogeneous Poisson point process of `density` points per km^2
/// over `region`.
pub fn sample_ppp<T: Real, R: Rng + ?Sized>(
    density: f64,
    region: &Region<T>,
    rng: &mut R,
) -> Result<Vec<Position<T>>> {
    if !(density > 0.0 && density.is_finite()) {
        return Err(Error::config("density", "must be positive and finite"));
    }
    let area = region.area_km2().as_f64();
    if !(area > 0.0) {
        return Err(Error::config("region", "zero-area region"));
    }
    let mean = density * area;
    let count = Poisson::new(mean)
        .map_err(|e| Error::config("density", e.to_string()))?
        .sample(rng) as usize;
    let (w, h) = (region.width.as_f64(), region.height.as_f64());
    Ok((0..count)
        .map(|_| {
            let x = rng.random::<f64>() * w;
            let y = rng.random::<f64>() * h;
            Position::new(T::lit(x), T::lit(y))
        })
        .collect())
}

/// One independent Bernoulli(`p_w`) wired flag per site.
pub fn draw_roles<R: Rng + ?Sized>(n: usize, p_w: f64, rng: &mut R) -> Vec<bool> {
    (0..n).map(|_| rng.random::<f64>() < p_w).collect()
}

/// Marks each site wired with probability `p_w`, redrawing all roles until
/// at least one wired and one wireless gNB exist, then gives every node `sectors`
/// boresights with a per-node random rotation and picks the origin.
pub fn assign_roles<T: Real, R: Rng + ?Sized>(
    positions: &[Position<T>],
    region: Region<T>,
    p_w: f64,
    sectors: usize,
    rng: &mut R,
) -> Result<Deployment<T>> {
    if !(p_w > 0.0 && p_w < 1.0) {
        return Err(Error::config("p_w", "must lie strictly between 0 and 1"));
    }
    if sectors == 0 {
        return Err(Error::config("S", "must be at least 1"));
    }
    if positions.is_empty() {
        return Err(Error::config("positions", "no gNB positions to assign roles to"));
    }
    if positions.len() < 2 {
        return Err(Error::config(
            "positions",
            "a deployment needs at least two gNBs (one wired, one wireless)",
        ));
    }

    let mut draws = 0;
    let roles = loop {
        let roles = draw_roles(positions.len(), p_w, rng);
        if roles.iter().any(|&w| w) && roles.iter().any(|&w| !w) {
            break roles;
        }
        draws += 1;
        if draws >= MAX_ROLE_DRAWS {
            return Err(Error::config("p_w", "could not draw both wired and wireless gNBs"));
        }
    };

    let spacing = T::TAU() / T::from_usize_lossy(sectors);
    let gnbs: Vec<GnbNode<T>> = positions
        .iter()
        .zip(&roles)
        .enumerate()
        .map(|(id, (&position, &is_wired))| {
            let offset = T::lit(rng.random::<f64>()) * spacing;
            GnbNode {
                id,
                position,
                is_wired,
                sector_boresights: (0..sectors)
                    .map(|s| offset + T::from_usize_lossy(s) * spacing)
                    .collect(),
                attached_count: 0,
            }
        })
        .collect();

    let center = region.center();
    let origin_id = gnbs
        .iter()
        .filter(|g| !g.is_wired)
        .min_by(|a, b| {
            a.position
                .distance_sq(&center)
                .partial_cmp(&b.position.distance_sq(&center))
                .expect("finite distances")
                .then(a.id.cmp(&b.id))
        })
        .map(|g| g.id)
        .expect("at least one wireless gNB");

    Ok(Deployment {
        region,
        gnbs,
        ue_positions: Vec::new(),
        origin_id,
    })
}

/// Wired gNB closest to `node_id` (lowest id on ties), or `None` if the
/// deployment has no wired gNB.
pub fn nearest_wired<T: Real>(node_id: usize, deployment: &Deployment<T>) -> Option<usize> {
    let here = deployment.node(node_id).position;
    deployment
        .gnbs
        .iter()
        .filter(|g| g.is_wired)
        .min_by(|a, b| {
            a.position
                .distance_sq(&here)
                .partial_cmp(&b.position.distance_sq(&here))
                .expect("finite distances")
                .then(a.id.cmp(&b.id))
        })
        .map(|g| g.id)
}

/// Keeps the candidates lying strictly on the wired side of the line through
/// `current` perpendicular to the `current -> wired_target` segment.
pub fn half_plane_filter<T: Real, L: Located<T> + Clone>(
    current: Position<T>,
    wired_target: Position<T>,
    candidates: &[L],
) -> Vec<L> {
    candidates
        .iter()
        .filter(|c| current.projection(&c.position(), &wired_target) > T::zero())
        .cloned()
        .collect()
}
