use std::borrow::Cow;
use std::sync::Arc;

use num_complex::Complex;

use super::{Grid, SpaceDescriptor};
use crate::error::{contract, domain, Result};
use crate::real::Real;

/// Which variable the node values are attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinates {
    /// Values at `x_i`, element of `L^{p,α}`.
    Conformable,
    /// Values at `ξ_i = x_i^α`, element of classical `L^p`.
    Transformed,
}

// Read value = α^{steps/p} · stored. Keeping the normalisation symbolic makes
// U_p^{-1} ∘ U_p bit-exact.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PendingScale<T> {
    steps: i32,
    p: T,
}

/// Complex samples on a [`Grid`], interpolated linearly in `ξ`.
#[derive(Debug, Clone)]
pub struct GridFunction<T> {
    grid: Arc<Grid<T>>,
    coords: Coordinates,
    stored: Vec<Complex<T>>,
    scale: PendingScale<T>,
}

impl<T: Real> PartialEq for GridFunction<T> {
    fn eq(&self, other: &Self) -> bool {
        self.grid.same_as(&other.grid) && self.coords == other.coords && self.values() == other.values()
    }
}

impl<T: Real> GridFunction<T> {
    /// Wraps node values; fails on length mismatch or non-finite entries.
    pub fn from_values(desc: &SpaceDescriptor<T>, coords: Coordinates, values: Vec<Complex<T>>) -> Result<Self> {
        Self::on_grid(Arc::clone(desc.grid()), coords, values)
    }

    pub(crate) fn on_grid(grid: Arc<Grid<T>>, coords: Coordinates, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(contract(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(domain(format!("non-finite value at node {i}")));
        }
        Ok(GridFunction {
            grid,
            coords,
            stored: values,
            scale: PendingScale { steps: 0, p: T::one() },
        })
    }

    /// Samples `f` at the nodes of the chosen coordinate (`x_i` or `ξ_i`).
    pub fn sample(desc: &SpaceDescriptor<T>, coords: Coordinates, f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        let nodes = match coords {
            Coordinates::Conformable => desc.grid().x(),
            Coordinates::Transformed => desc.grid().xi(),
        };
        Self::from_values(desc, coords, nodes.iter().map(|&t| f(t)).collect())
    }

    pub fn zeros(desc: &SpaceDescriptor<T>, coords: Coordinates) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        GridFunction {
            grid: Arc::clone(desc.grid()),
            coords,
            stored: vec![zero; desc.n()],
            scale: PendingScale { steps: 0, p: T::one() },
        }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn coords(&self) -> Coordinates {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.stored.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stored.is_empty()
    }

    fn factor(&self) -> Option<T> {
        if self.scale.steps == 0 || self.grid.alpha() == T::one() {
            None
        } else {
            Some(self.grid.alpha().powf(T::from_i32(self.scale.steps).expect("i32") / self.scale.p))
        }
    }

    /// Node values with any pending normalisation applied.
    pub fn values(&self) -> Cow<'_, [Complex<T>]> {
        match self.factor() {
            None => Cow::Borrowed(&self.stored),
            Some(c) => Cow::Owned(self.stored.iter().map(|v| v * c).collect()),
        }
    }

    pub fn value(&self, i: usize) -> Complex<T> {
        match self.factor() {
            None => self.stored[i],
            Some(c) => self.stored[i] * c,
        }
    }

    /// Node coordinates matching [`coords`](Self::coords).
    pub fn nodes(&self) -> &[T] {
        match self.coords {
            Coordinates::Conformable => self.grid.x(),
            Coordinates::Transformed => self.grid.xi(),
        }
    }

    pub(crate) fn rescaled(&self, coords: Coordinates, steps: i32, p: T) -> Self {
        let base = if self.scale.steps == 0 || self.scale.p == p {
            self.clone()
        } else {
            self.materialized()
        };
        let next = base.scale.steps + steps;
        GridFunction {
            coords,
            scale: PendingScale { steps: next, p },
            ..base
        }
    }

    fn materialized(&self) -> Self {
        GridFunction {
            grid: Arc::clone(&self.grid),
            coords: self.coords,
            stored: self.values().into_owned(),
            scale: PendingScale { steps: 0, p: T::one() },
        }
    }

    /// Same nodes, values replaced.
    pub fn with_values(&self, values: Vec<Complex<T>>) -> Result<Self> {
        Self::on_grid(Arc::clone(&self.grid), self.coords, values)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        GridFunction {
            stored: self.stored.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    fn check_pair(&self, other: &Self) -> Result<()> {
        if !self.grid.same_as(&other.grid) {
            return Err(contract("functions live on different grids"));
        }
        if self.coords != other.coords {
            return Err(contract("functions are in different coordinates"));
        }
        Ok(())
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Complex<T>, other: &Self, b: Complex<T>) -> Result<Self> {
        self.check_pair(other)?;
        let (u, v) = (self.values(), other.values());
        let out = u.iter().zip(v.iter()).map(|(x, y)| x * a + y * b).collect();
        self.with_values(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let one = Complex::new(T::one(), T::zero());
        self.combine(one, other, one)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let one = Complex::new(T::one(), T::zero());
        self.combine(one, other, -one)
    }

    /// Linear interpolant in `ξ`: constant on `(0, ξ_1]`, zero beyond `ξ_n`.
    pub fn interpolate_xi(&self, xi: T) -> Complex<T> {
        let h = self.grid.spacing();
        let n = self.len();
        let zero = Complex::new(T::zero(), T::zero());
        if xi > self.grid.xi_max() {
            return zero;
        }
        let q = xi / h;
        if q <= T::one() {
            return self.value(0);
        }
        let k = q.floor();
        let i = k.to_usize().unwrap_or(n).min(n);
        let w = q - k;
        // q ∈ [i, i+1) between nodes i (index i-1) and i+1 (index i)
        if i >= n {
            return self.value(n - 1);
        }
        let left = self.value(i - 1);
        if w == T::zero() {
            return left;
        }
        left * (T::one() - w) + self.value(i) * w
    }
}
