//! Minimal double-double arithmetic, enough for correctly rounded `x^e`.
//!
//! Values are unevaluated sums `hi + lo` with `|lo| <= ulp(hi)/2`.

use std::sync::OnceLock;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::new(q3))
    }

    pub fn div_f64(self, b: f64) -> Dd {
        self.div(Dd::new(b))
    }

    fn ldexp(self, k: i32) -> Dd {
        // split the scaling so that neither factor overflows on its own
        let half = k / 2;
        let a = 2f64.powi(half);
        let b = 2f64.powi(k - half);
        Dd {
            hi: self.hi * a * b,
            lo: self.lo * a * b,
        }
    }
}

/// Reciprocals of odd integers 1/(2j+1) for the atanh series.
fn odd_reciprocals() -> &'static [Dd] {
    static TABLE: OnceLock<Vec<Dd>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..24)
            .map(|j| Dd::new(1.0).div_f64((2 * j + 1) as f64))
            .collect()
    })
}

/// Natural log of a positive finite double, to double-double accuracy.
pub(crate) fn ln(x: f64) -> Dd {
    debug_assert!(x > 0.0 && x.is_finite());
    let (mut m, mut k) = (x, 0i32);
    if m < f64::MIN_POSITIVE {
        m *= 2f64.powi(60);
        k -= 60;
    }
    let bits = m.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i32 - 1023;
    m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
    k += e;
    if m > std::f64::consts::SQRT_2 {
        m *= 0.5;
        k += 1;
    }
    // ln m = 2 atanh(z), z = (m - 1)/(m + 1); m - 1 is exact for m in [1/√2, √2]
    let (s, e) = two_sum(m, 1.0);
    let z = Dd::new(m - 1.0).div(Dd { hi: s, lo: e });
    let z2 = z.mul(z);
    let table = odd_reciprocals();
    let mut acc = table[table.len() - 1];
    for c in table.iter().rev().skip(1) {
        acc = acc.mul(z2).add(*c);
    }
    let ln_m = z.mul(acc).mul_f64(2.0);
    LN2.mul_f64(k as f64).add(ln_m)
}

/// Natural log of a double-double with positive leading part.
pub(crate) fn ln_dd(x: Dd) -> Dd {
    let base = ln(x.hi);
    // ln(hi + lo) = ln(hi) + ln1p(lo/hi); |lo/hi| <= 2^-53 so one term suffices
    base.add(Dd::new(x.lo / x.hi))
}

/// Exponential of a double-double argument.
pub(crate) fn exp(y: Dd) -> Dd {
    if y.hi > 709.9 {
        return Dd::new(f64::INFINITY);
    }
    if y.hi < -745.2 {
        return Dd::new(0.0);
    }
    let k = (y.hi / LN2.hi).round();
    let r = y.sub(LN2.mul_f64(k));
    let r = Dd {
        hi: r.hi / 256.0,
        lo: r.lo / 256.0,
    };
    // Taylor series for |r| <= ln2/512
    let mut term = Dd::new(1.0);
    let mut sum = Dd::new(1.0);
    for n in 1..=14 {
        term = term.mul(r).div_f64(n as f64);
        sum = sum.add(term);
        if term.hi.abs() < 1e-36 {
            break;
        }
    }
    for _ in 0..8 {
        sum = sum.mul(sum);
    }
    sum.ldexp(k as i32)
}

/// `x^e` for positive `x`, correctly rounded in all but pathological cases.
#[allow(dead_code)]
pub(crate) fn pow(x: f64, e: f64) -> f64 {
    exp(ln(x).mul_f64(e)).hi
}
