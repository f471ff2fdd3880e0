//! Adaptive Gauss–Kronrod (10/21 point) integration for real and complex
//! integrands, with a rational map for semi-infinite ranges.

use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute tolerance for all quadratures in the crate.
pub const DEFAULT_TOL: f64 = 1e-10;

const DEFAULT_MAX_INTERVALS: usize = 4000;

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_715_811_399_890,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub abs_error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self::new(DEFAULT_TOL)
    }
}

struct Piece<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl<T> Eq for Piece<T> {}

impl<T> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::default();
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = (value - gauss * half).magnitude();
    (value, error)
}

impl Quadrature {
    pub fn new(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            max_intervals: DEFAULT_MAX_INTERVALS,
        }
    }

    pub fn with_max_intervals(mut self, max_intervals: usize) -> Self {
        self.max_intervals = max_intervals.max(1);
        self
    }

    /// Integrates `f` over the finite interval `[a, b]`, bisecting the
    /// subinterval with the largest error estimate until the summed estimate
    /// drops below the absolute tolerance.
    pub fn integrate<T, F>(&self, f: F, a: f64, b: f64) -> Result<Estimate<T>>
    where
        T: QuadValue,
        F: Fn(f64) -> T,
    {
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerance must be > 0, got {}",
                self.abs_tol
            )));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!(
                "finite interval expected, got [{a}, {b}]"
            )));
        }
        if a == b {
            return Ok(Estimate {
                value: T::default(),
                abs_error: 0.0,
                intervals: 0,
            });
        }

        let (value, error) = gauss_kronrod(&f, a, b);
        let mut heap = BinaryHeap::new();
        heap.push(Piece { a, b, value, error });
        let mut total_error = error;

        while total_error > self.abs_tol {
            if heap.len() >= self.max_intervals {
                return Err(Error::Quadrature {
                    intervals: heap.len(),
                    estimate: total_error,
                    target: self.abs_tol,
                });
            }
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Interval exhausted floating-point resolution.
                return Err(Error::Quadrature {
                    intervals: heap.len() + 1,
                    estimate: total_error,
                    target: self.abs_tol,
                });
            }
            let (lv, le) = gauss_kronrod(&f, worst.a, mid);
            let (rv, re) = gauss_kronrod(&f, mid, worst.b);
            total_error += le + re - worst.error;
            heap.push(Piece {
                a: worst.a,
                b: mid,
                value: lv,
                error: le,
            });
            heap.push(Piece {
                a: mid,
                b: worst.b,
                value: rv,
                error: re,
            });
        }

        // Re-sum in interval order so the result does not depend on heap layout.
        let mut pieces = heap.into_vec();
        pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
        let intervals = pieces.len();
        let mut value = T::default();
        let mut abs_error = 0.0;
        for p in pieces {
            value = value + p.value;
            abs_error += p.error;
        }
        Ok(Estimate {
            value,
            abs_error,
            intervals,
        })
    }

    /// Integrates `f` over `[a, ∞)` through the substitution
    /// `x = a + scale * s / (1 - s)`, `s ∈ [0, 1)`.
    pub fn integrate_semi_infinite<T, F>(&self, f: F, a: f64, scale: f64) -> Result<Estimate<T>>
    where
        T: QuadValue,
        F: Fn(f64) -> T,
    {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "semi-infinite map scale must be > 0, got {scale}"
            )));
        }
        self.integrate(
            |s: f64| {
                let one_minus = 1.0 - s;
                if one_minus <= 0.0 {
                    return T::default();
                }
                let x = a + scale * s / one_minus;
                f(x) * (scale / (one_minus * one_minus))
            },
            0.0,
            1.0,
        )
    }
}
