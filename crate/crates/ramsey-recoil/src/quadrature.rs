//! Globally adaptive Gauss–Kronrod (7/15-pair of order 21) quadrature for
//! vector-valued integrands.
//!
//! All components share one subdivision; an interval's error is the largest
//! component error.  Interval contributions are summed with compensation.

use crate::error::{Error, Result};
use crate::sum::Neumaier;

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

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_intervals: 500,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<const D: usize> {
    pub value: [f64; D],
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

struct Panel<const D: usize> {
    a: f64,
    b: f64,
    value: [f64; D],
    error: f64,
}

fn gk21<const D: usize, F: FnMut(f64) -> [f64; D]>(f: &mut F, a: f64, b: f64) -> Panel<D> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = [0.0; D];
    let mut resg = [0.0; D];
    let mut resabs = [0.0; D];
    for c in 0..D {
        resk[c] = fc[c] * WGK[10];
        resabs[c] = resk[c].abs();
    }
    let mut fv1 = [[0.0; D]; 10];
    let mut fv2 = [[0.0; D]; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for c in 0..D {
            resk[c] += WGK[j] * (f1[c] + f2[c]);
            resabs[c] += WGK[j] * (f1[c].abs() + f2[c].abs());
            if j % 2 == 1 {
                resg[c] += WG[j / 2] * (f1[c] + f2[c]);
            }
        }
        fv1[j] = f1;
        fv2[j] = f2;
    }

    let mut value = [0.0; D];
    let mut error = 0.0f64;
    for c in 0..D {
        let mean = 0.5 * resk[c];
        let mut resasc = WGK[10] * (fc[c] - mean).abs();
        for j in 0..10 {
            resasc += WGK[j] * ((fv1[j][c] - mean).abs() + (fv2[j][c] - mean).abs());
        }
        let resasc = resasc * half.abs();
        let resabs = resabs[c] * half.abs();
        value[c] = resk[c] * half;
        let mut err = ((resk[c] - resg[c]) * half).abs();
        if resasc != 0.0 && err != 0.0 {
            err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
        }
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * resabs);
        }
        error = error.max(err);
    }
    Panel { a, b, value, error }
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate<const D: usize, F>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<QuadResult<D>>
where
    F: FnMut(f64) -> [f64; D],
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::QuadratureFailure(format!(
            "interval [{a}, {b}] must be finite"
        )));
    }
    let mut panels = vec![gk21(&mut f, a, b)];
    let mut evaluations = 21;
    loop {
        let mut value = [0.0; D];
        for (c, v) in value.iter_mut().enumerate() {
            let mut acc = Neumaier::new();
            for p in &panels {
                acc.add(p.value[c]);
            }
            *v = acc.value();
        }
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let scale = value.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let target = opts.abs_tol.max(opts.rel_tol * scale);
        if error <= target {
            return Ok(QuadResult {
                value,
                error,
                intervals: panels.len(),
                evaluations,
            });
        }
        if panels.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailure(format!(
                "error estimate {error:.3e} above target {target:.3e} after {} intervals",
                panels.len()
            )));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, be), (i, p)| {
                if p.error > be {
                    (i, p.error)
                } else {
                    (bi, be)
                }
            });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::QuadratureFailure(format!(
                "interval [{:.6e}, {:.6e}] cannot be bisected further",
                p.a, p.b
            )));
        }
        panels.push(gk21(&mut f, p.a, mid));
        panels.push(gk21(&mut f, mid, p.b));
        evaluations += 42;
    }
}
