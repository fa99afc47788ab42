//! Discretized conformable Lebesgue spaces `L^{p,α}(0, X]` and the isometries
//! `U_p` onto classical `L^p(0, X^α]`.
//!
//! Grids are uniform in `ξ = x^α`, where the weighted measure `x^{α−1} dx`
//! becomes `(1/α) dξ`. Functions interpolate linearly in `ξ`, so `U_p` is a
//! diagonal map between matched grids.

mod csv;
mod function;

use std::sync::Arc;

pub use csv::{read_csv, write_csv};
pub use function::{Coordinates, GridFunction};

use num_complex::Complex;

use crate::error::{contract, domain, Result};
use crate::kernel::Order;
use crate::real::Real;

/// Nodes `ξ_i = i h`, `h = X^α/n`, and their preimages `x_i = ξ_i^{1/α}`, `i = 1..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    alpha: T,
    x_max: T,
    h: T,
    xi: Vec<T>,
    x: Vec<T>,
}

impl<T: Real> Grid<T> {
    fn new(order: Order<T>, x_max: T, n: usize) -> Self {
        let alpha = order.alpha();
        let xi_max = if order.is_classical() { x_max } else { x_max.powf(alpha) };
        let h = xi_max / T::from_usize_lossy(n);
        let inv = T::one() / alpha;
        let mut xi: Vec<T> = (1..=n).map(|i| T::from_usize_lossy(i) * h).collect();
        let mut x: Vec<T> = xi
            .iter()
            .map(|&v| if order.is_classical() { v } else { v.powf(inv) })
            .collect();
        xi[n - 1] = xi_max;
        x[n - 1] = x_max;
        Grid { alpha, x_max, h, xi, x }
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// Uniform spacing in `ξ`.
    pub fn spacing(&self) -> T {
        self.h
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn x_max(&self) -> T {
        self.x_max
    }

    /// `X^α`, the right end of the transformed window.
    pub fn xi_max(&self) -> T {
        self.xi[self.xi.len() - 1]
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn xi(&self) -> &[T] {
        &self.xi
    }

    /// Trapezoid weights in `ξ` for the interpolant extended flat on `(0, ξ_1]`.
    pub fn weight(&self, i: usize) -> T {
        let n = self.len();
        if i == 0 {
            T::lit(1.5) * self.h
        } else if i + 1 == n {
            T::lit(0.5) * self.h
        } else {
            self.h
        }
    }

    pub(crate) fn same_as(&self, other: &Grid<T>) -> bool {
        std::ptr::eq(self, other) || (self.alpha == other.alpha && self.x_max == other.x_max && self.len() == other.len())
    }
}

/// The truncated space `L^{p,α}(0, X]` at resolution `n`.
#[derive(Debug, Clone)]
pub struct SpaceDescriptor<T> {
    p: T,
    order: Order<T>,
    grid: Arc<Grid<T>>,
}

impl<T: Real> SpaceDescriptor<T> {
    pub fn new(p: T, order: Order<T>, x_max: T, n: usize) -> Result<Self> {
        if !(p >= T::one()) || !p.is_finite() {
            return Err(domain(format!("exponent p must satisfy 1 <= p < ∞, got {p}")));
        }
        if !(x_max > T::zero()) || !x_max.is_finite() {
            return Err(domain(format!("x_max must be positive and finite, got {x_max}")));
        }
        if n < 2 {
            return Err(domain(format!("grid needs n >= 2 nodes, got {n}")));
        }
        Ok(SpaceDescriptor {
            p,
            order,
            grid: Arc::new(Grid::new(order, x_max, n)),
        })
    }

    /// Same window and order with a different exponent; shares the grid.
    pub fn with_p(&self, p: T) -> Result<Self> {
        if !(p >= T::one()) || !p.is_finite() {
            return Err(domain(format!("exponent p must satisfy 1 <= p < ∞, got {p}")));
        }
        Ok(SpaceDescriptor {
            p,
            order: self.order,
            grid: Arc::clone(&self.grid),
        })
    }

    pub fn p(&self) -> T {
        self.p
    }

    /// `p' = p/(p−1)`, infinite for `p = 1`.
    pub fn conjugate_exponent(&self) -> T {
        if self.p == T::one() {
            T::infinity()
        } else {
            self.p / (self.p - T::one())
        }
    }

    pub fn order(&self) -> Order<T> {
        self.order
    }

    pub fn x_max(&self) -> T {
        self.grid.x_max
    }

    pub fn n(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &Arc<Grid<T>> {
        &self.grid
    }

    fn check(&self, f: &GridFunction<T>) -> Result<()> {
        if !self.grid.same_as(f.grid()) {
            return Err(contract("function does not live on this descriptor's grid"));
        }
        Ok(())
    }
}

/// Grid nodes `x_i = (i X^α/n)^{1/α}`.
pub fn make_grid<T: Real>(desc: &SpaceDescriptor<T>) -> &[T] {
    desc.grid.x()
}

fn sum_compensated<T: Real>(terms: impl Iterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut c = T::zero();
    for v in terms {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c = c + ((sum - t) + v);
        } else {
            c = c + ((v - t) + sum);
        }
        sum = t;
    }
    sum + c
}

// (Σ w_i |v_i|^p)^{1/p}, scaled by the largest modulus to avoid overflow.
fn weighted_p_norm<T: Real>(grid: &Grid<T>, values: &[Complex<T>], p: T, measure: T) -> T {
    let big = values.iter().fold(T::zero(), |m, v| m.max(v.norm()));
    if big == T::zero() {
        return T::zero();
    }
    let sum = sum_compensated(values.iter().enumerate().map(|(i, v)| {
        let r = v.norm() / big;
        let rp = if p == T::one() {
            r
        } else if p == T::lit(2.0) {
            r * r
        } else {
            r.powf(p)
        };
        grid.weight(i) * rp
    }));
    let inner = sum * measure;
    big * if p == T::one() { inner } else if p == T::lit(2.0) { inner.sqrt() } else { inner.powf(T::one() / p) }
}

fn measure_factor<T: Real>(f: &GridFunction<T>) -> T {
    match f.coords() {
        Coordinates::Conformable => T::one() / f.grid().alpha(),
        Coordinates::Transformed => T::one(),
    }
}

/// `‖f‖_{p,α}` of a function in conformable coordinates.
pub fn norm_p_alpha<T: Real>(desc: &SpaceDescriptor<T>, f: &GridFunction<T>) -> Result<T> {
    desc.check(f)?;
    if f.coords() != Coordinates::Conformable {
        return Err(contract("norm_p_alpha expects a function in conformable coordinates"));
    }
    Ok(weighted_p_norm(f.grid(), &f.values(), desc.p, measure_factor(f)))
}

/// Classical `‖g‖_{L^p(0, X^α]}` of a function on the `ξ`-grid.
pub fn norm_lp<T: Real>(desc: &SpaceDescriptor<T>, g: &GridFunction<T>) -> Result<T> {
    desc.check(g)?;
    if g.coords() != Coordinates::Transformed {
        return Err(contract("norm_lp expects a function in transformed coordinates"));
    }
    Ok(weighted_p_norm(g.grid(), &g.values(), desc.p, T::one()))
}

/// The norm appropriate to the function's coordinates.
pub fn norm<T: Real>(desc: &SpaceDescriptor<T>, f: &GridFunction<T>) -> Result<T> {
    desc.check(f)?;
    Ok(weighted_p_norm(f.grid(), &f.values(), desc.p, measure_factor(f)))
}

/// Norm of an arbitrary exponent without building a new descriptor.
pub(crate) fn norm_with_exponent<T: Real>(f: &GridFunction<T>, p: T) -> T {
    if p.is_infinite() {
        return f.values().iter().fold(T::zero(), |m, v| m.max(v.norm()));
    }
    weighted_p_norm(f.grid(), &f.values(), p, measure_factor(f))
}

/// `‖f − h‖` in the space matching the coordinates of both arguments.
pub fn distance<T: Real>(desc: &SpaceDescriptor<T>, f: &GridFunction<T>, h: &GridFunction<T>) -> Result<T> {
    desc.check(f)?;
    desc.check(h)?;
    norm(desc, &f.sub(h)?)
}

/// `⟨f, h⟩ = ∫ f h̄` for the coordinate measure (`x^{α−1}dx` or `dξ`).
pub fn inner_product<T: Real>(desc: &SpaceDescriptor<T>, f: &GridFunction<T>, h: &GridFunction<T>) -> Result<Complex<T>> {
    desc.check(f)?;
    desc.check(h)?;
    if f.coords() != h.coords() {
        return Err(contract("inner product of functions in different coordinates"));
    }
    let (fv, hv) = (f.values(), h.values());
    let grid = f.grid();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..grid.len() {
        acc = acc + fv[i] * hv[i].conj() * grid.weight(i);
    }
    Ok(acc * measure_factor(f))
}

/// `(U_p f)(ξ) = α^{−1/p} f(ξ^{1/α})`.
pub fn u_p<T: Real>(desc: &SpaceDescriptor<T>, f: &GridFunction<T>) -> Result<GridFunction<T>> {
    desc.check(f)?;
    if f.coords() != Coordinates::Conformable {
        return Err(contract("u_p expects a function in conformable coordinates"));
    }
    Ok(f.rescaled(Coordinates::Transformed, -1, desc.p))
}

/// `(U_p^{-1} g)(x) = α^{1/p} g(x^α)`.
pub fn u_p_inverse<T: Real>(desc: &SpaceDescriptor<T>, g: &GridFunction<T>) -> Result<GridFunction<T>> {
    desc.check(g)?;
    if g.coords() != Coordinates::Transformed {
        return Err(contract("u_p_inverse expects a function in transformed coordinates"));
    }
    Ok(g.rescaled(Coordinates::Conformable, 1, desc.p))
}
