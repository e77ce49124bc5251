//! Adaptive Gauss–Kronrod (7/15) quadrature in `f64`, used as an independent
//! cross-check of the exact integrals.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    /// Integral of `|f|`, the natural scale for relative comparisons.
    pub abs_value: f64,
    pub error_estimate: f64,
}

fn kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for i in 0..7 {
        let dx = h * XGK[i];
        let (f1, f2) = (f(c - dx), f(c + dx));
        k += WGK[i] * (f1 + f2);
        abs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    (k * h, (abs * h).abs(), ((k - g) * h).abs())
}

fn adapt(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> Quadrature {
    let (value, abs_value, err) = kronrod(f, a, b);
    if err <= tol || depth == 0 || (b - a).abs() < 1e-12 {
        return Quadrature { value, abs_value, error_estimate: err };
    }
    let m = 0.5 * (a + b);
    let l = adapt(f, a, m, 0.5 * tol, depth - 1);
    let r = adapt(f, m, b, 0.5 * tol, depth - 1);
    Quadrature {
        value: l.value + r.value,
        abs_value: l.abs_value + r.abs_value,
        error_estimate: l.error_estimate + r.error_estimate,
    }
}

/// `∫_a^b f` to absolute tolerance `rel_tol·∫|f|`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Quadrature {
    let (_, scale, _) = kronrod(&f, a, b);
    adapt(&f, a, b, rel_tol * scale.max(f64::MIN_POSITIVE), 40)
}
