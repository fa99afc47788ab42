use std::io::Write;

use num_complex::Complex;
use rand::Rng;

use super::{weighted_orbit, WeightCocycle};
use crate::error::{contract, domain, Error, Result};
use crate::real::Real;
use crate::rng::stream;
use crate::spaces::{distance, norm_lp, u_p, u_p_inverse, Coordinates, GridFunction, SpaceDescriptor};

/// Finite target set standing in for a dense subset: functions supported in
/// `ξ ∈ (0, L]` and the hit tolerance `ε`.
#[derive(Debug, Clone)]
pub struct TargetList<T> {
    targets: Vec<GridFunction<T>>,
    support: T,
    epsilon: T,
}

impl<T: Real> TargetList<T> {
    /// Fails unless every target vanishes at all nodes with `ξ > L` and `ε > 0`.
    pub fn new(targets: Vec<GridFunction<T>>, support: T, epsilon: T) -> Result<Self> {
        if !(support > T::zero()) {
            return Err(domain(format!("target support length must be positive, got {support}")));
        }
        if !(epsilon > T::zero()) {
            return Err(domain(format!("hit tolerance must be positive, got {epsilon}")));
        }
        for (j, g) in targets.iter().enumerate() {
            if g.coords() != Coordinates::Conformable {
                return Err(contract(format!("target {j} is not in conformable coordinates")));
            }
            let outside = g.grid().xi().iter().zip(g.values().iter()).any(|(&u, v)| u > support && v.norm() != T::zero());
            if outside {
                return Err(contract(format!("target {j} has mass beyond ξ = {support}")));
            }
        }
        Ok(TargetList { targets, support, epsilon })
    }

    pub fn targets(&self) -> &[GridFunction<T>] {
        &self.targets
    }

    pub fn support(&self) -> T {
        self.support
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// `count` step functions of `ξ`, each constant on a random subinterval of
/// `(0.1 L, L]` of length at least `0.3 L`, with heights `±[0.5, 2]`.
pub fn step_targets<T: Real>(desc: &SpaceDescriptor<T>, support: T, count: usize, seed: u64) -> Result<Vec<GridFunction<T>>> {
    let mut rng = stream(seed, "step-targets");
    let l = support.to_f64_lossy();
    let alpha = desc.order().alpha().to_f64_lossy();
    (0..count)
        .map(|_| {
            let len = rng.gen_range(0.3..0.9) * l;
            let a = rng.gen_range(0.1 * l..(l - len).max(0.1 * l + 1e-12));
            let b = (a + len).min(l);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let height = sign * rng.gen_range(0.5..2.0);
            GridFunction::sample(desc, Coordinates::Conformable, |x: T| {
                let u = x.to_f64_lossy().powf(alpha);
                let v = if u > a && u <= b { height } else { 0.0 };
                Complex::new(T::lit(v), T::zero())
            })
        })
        .collect()
}

/// A vector whose weighted orbit passes within `ε` of every target.
#[derive(Debug, Clone)]
pub struct HypercyclicCandidate<T> {
    pub f: GridFunction<T>,
    pub hit_times: Vec<T>,
    /// `Σ_{i>j} e^{−κ(t_i−t_j)} ‖g_i‖` per target: bounds the miss at `t_j`.
    pub tail_bounds: Vec<T>,
    pub spacing: T,
    pub kappa: T,
    pub epsilon: T,
}

impl<T: Real> HypercyclicCandidate<T> {
    pub fn tail_bound(&self) -> T {
        self.tail_bounds.iter().fold(T::zero(), |m, &v| m.max(v))
    }

    /// Plain-text `key=value` block.
    pub fn metadata(&self) -> String {
        let hits: Vec<String> = self.hit_times.iter().map(|t| format!("{t:.16e}")).collect();
        let tails: Vec<String> = self.tail_bounds.iter().map(|t| format!("{t:.16e}")).collect();
        format!(
            "kappa={:.16e}\nhit_times={}\ntail_bound={:.16e}\ntail_bounds={}\nepsilon={:.16e}\nspacing={:.16e}\n",
            self.kappa,
            hits.join(","),
            self.tail_bound(),
            tails.join(","),
            self.epsilon,
            self.spacing
        )
    }
}

/// Block concatenation `F(ξ) = Σ_j e^{−κ t_j} g_j(ξ − t_j)` with `g_j = U_p(target_j)`,
/// transported back by `U_p^{-1}`.
///
/// `t_1 = L` and `t_{j+1} − t_j = L + κ^{-1} ln(m max‖g_i‖ / (ε/2)) + 1`, both
/// rounded up to grid multiples so every hit is an exact index shift.
pub fn build_hypercyclic_candidate<T: Real>(
    desc: &SpaceDescriptor<T>,
    cocycle: WeightCocycle<T>,
    targets: &TargetList<T>,
) -> Result<HypercyclicCandidate<T>> {
    let kappa = cocycle.kappa();
    if !(kappa > T::zero()) {
        return Err(Error::Criterion(format!(
            "weighted translation with κ = {kappa} has no orbit growth; hypercyclic construction needs κ > 0"
        )));
    }
    let eps = targets.epsilon();
    let m = targets.len();
    if m == 0 {
        return Ok(HypercyclicCandidate {
            f: GridFunction::zeros(desc, Coordinates::Conformable),
            hit_times: Vec::new(),
            tail_bounds: Vec::new(),
            spacing: T::zero(),
            kappa,
            epsilon: eps,
        });
    }
    let blocks: Vec<GridFunction<T>> = targets.targets().iter().map(|g| u_p(desc, g)).collect::<Result<_>>()?;
    let norms: Vec<T> = blocks.iter().map(|g| norm_lp(desc, g)).collect::<Result<_>>()?;
    let biggest = norms.iter().fold(T::zero(), |a, &b| a.max(b));
    let h = desc.grid().spacing();
    let steps_up = |v: T| -> usize { ((v / h).ceil()).to_usize().unwrap_or(usize::MAX) };
    let l = targets.support();
    let log_term = if biggest > T::zero() {
        (T::from_usize_lossy(m) * biggest / (T::lit(0.5) * eps)).ln().max(T::zero())
    } else {
        T::zero()
    };
    let first = steps_up(l);
    let gap = steps_up(l + log_term / kappa + T::one());
    let hit_steps: Vec<usize> = (0..m).map(|j| first + j * gap).collect();
    let hit_times: Vec<T> = hit_steps.iter().map(|&k| T::from_usize_lossy(k) * h).collect();
    let last = hit_times[m - 1];
    let xi_max = desc.grid().xi_max();
    if last + l > xi_max {
        let need = last + l;
        let alpha = desc.order().alpha();
        let required = if desc.order().is_classical() { need } else { need.powf(T::one() / alpha) };
        return Err(Error::WindowTooSmall {
            required_x_max: required.to_f64_lossy(),
        });
    }
    let n = desc.n();
    let zero = Complex::new(T::zero(), T::zero());
    let mut values = vec![zero; n];
    for (j, block) in blocks.iter().enumerate() {
        let damp = (-kappa * hit_times[j]).exp();
        let bv = block.values();
        let k = hit_steps[j];
        for (i, v) in bv.iter().enumerate() {
            if v.norm() != T::zero() && i + k < n {
                values[i + k] = values[i + k] + v * damp;
            }
        }
    }
    let tail_bounds: Vec<T> = (0..m)
        .map(|j| {
            (j + 1..m).fold(T::zero(), |acc, i| acc + (-kappa * (hit_times[i] - hit_times[j])).exp() * norms[i])
        })
        .collect();
    if let Some(j) = tail_bounds.iter().position(|&b| b > eps) {
        return Err(Error::Numerical {
            message: format!("tail bound for target {j} exceeds ε"),
            estimate: tail_bounds[j].to_f64_lossy(),
        });
    }
    let transformed = GridFunction::from_values(desc, Coordinates::Transformed, values)?;
    let f = u_p_inverse(desc, &transformed)?;
    Ok(HypercyclicCandidate {
        f,
        hit_times,
        tail_bounds,
        spacing: T::from_usize_lossy(gap) * h,
        kappa,
        epsilon: eps,
    })
}

/// One orbit sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitEntry<T> {
    pub t: T,
    pub target_index: usize,
    pub distance: T,
}

/// Distances from orbit points to targets, in ascending time.
#[derive(Debug, Clone, Default)]
pub struct OrbitTrace<T> {
    pub entries: Vec<OrbitEntry<T>>,
}

impl<T: Real> OrbitTrace<T> {
    /// Closest approach `(t, distance)` to target `j`.
    pub fn closest(&self, j: usize) -> Option<(T, T)> {
        self.entries
            .iter()
            .filter(|e| e.target_index == j)
            .fold(None, |best: Option<(T, T)>, e| match best {
                Some((_, d)) if d <= e.distance => best,
                _ => Some((e.t, e.distance)),
            })
    }

    /// Distance to target `j` at exactly time `t`, if sampled.
    pub fn at(&self, t: T, j: usize) -> Option<T> {
        self.entries.iter().find(|e| e.t == t && e.target_index == j).map(|e| e.distance)
    }

    /// CSV `t,target_index,distance`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,target_index,distance")?;
        for e in &self.entries {
            writeln!(out, "{:.16e},{},{:.16e}", e.t, e.target_index, e.distance)?;
        }
        Ok(())
    }
}

/// Hit times together with `probes` log-spaced times on `[h, t_max]`, sorted
/// and deduplicated.
pub fn default_time_grid<T: Real>(desc: &SpaceDescriptor<T>, hit_times: &[T], t_max: T, probes: usize) -> Vec<T> {
    let lo = desc.grid().spacing().ln();
    let hi = t_max.max(desc.grid().spacing()).ln();
    let mut out: Vec<T> = hit_times.to_vec();
    for k in 0..probes {
        let w = if probes > 1 { T::from_usize_lossy(k) / T::from_usize_lossy(probes - 1) } else { T::zero() };
        out.push((lo + (hi - lo) * w).exp());
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    out.dedup();
    out
}

/// `distance(e^{κt} T_α(t) f, target_j)` for every time and target.
pub fn orbit_trace<T: Real>(
    desc: &SpaceDescriptor<T>,
    cocycle: WeightCocycle<T>,
    f: &GridFunction<T>,
    targets: &TargetList<T>,
    time_grid: &[T],
) -> Result<OrbitTrace<T>> {
    if time_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(contract("orbit time grid must be strictly ascending"));
    }
    let orbit = weighted_orbit(desc, cocycle, f, time_grid)?;
    let mut entries = Vec::with_capacity(orbit.len() * targets.len());
    for (&t, point) in time_grid.iter().zip(&orbit) {
        for (j, g) in targets.targets().iter().enumerate() {
            entries.push(OrbitEntry {
                t,
                target_index: j,
                distance: distance(desc, point, g)?,
            });
        }
    }
    Ok(OrbitTrace { entries })
}
