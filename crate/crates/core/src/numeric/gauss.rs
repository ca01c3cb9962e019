use std::f64::consts::SQRT_2;

use crate::error::{domain, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// Above this point `ln Q` switches from `erfc` to its asymptotic series.
const SERIES_FROM: f64 = 35.0;

pub fn phi(x: f64) -> f64 {
    log_phi(x).exp()
}

pub fn log_phi(x: f64) -> f64 {
    -0.5 * x * x - LN_SQRT_2PI
}

/// Gaussian complementary cdf `Q(x) = P[Z > x]`.
pub fn q_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `ln Q(x)`, accurate in both tails.
pub fn q_tail_log(x: f64) -> f64 {
    if x < 0.0 {
        (-q_tail(-x)).ln_1p()
    } else if x < SERIES_FROM {
        q_tail(x).ln()
    } else {
        let r = 1.0 / (x * x);
        let series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r * (1.0 - 9.0 * r))));
        -0.5 * x * x - x.ln() - LN_SQRT_2PI + series.ln()
    }
}

/// `Q^{-1}(eps)` for `eps` in `(0, 1)`.
pub fn q_inverse(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("q_inverse needs eps in (0, 1), got {eps}"));
    }
    if eps > 0.5 {
        // 1 - eps is exact here.
        return Ok(-q_inverse(1.0 - eps)?);
    }
    Ok(refine(wichura(eps.ln()), eps.ln()))
}

/// `Q^{-1}` of a probability given by its logarithm; reaches below `1e-308`.
pub fn q_inverse_log(ln_eps: f64) -> Result<f64> {
    if !(ln_eps < 0.0) || ln_eps == f64::NEG_INFINITY {
        return domain(format!("q_inverse_log needs a finite negative log-probability, got {ln_eps}"));
    }
    if ln_eps > -std::f64::consts::LN_2 {
        let ln_c = super::ln_one_minus_exp(ln_eps);
        return Ok(-refine(wichura(ln_c), ln_c));
    }
    Ok(refine(wichura(ln_eps), ln_eps))
}

/// Newton on `ln Q(x) = ln_eps` for an upper-tail point `x >= 0`.
fn refine(mut x: f64, ln_eps: f64) -> f64 {
    for _ in 0..6 {
        let lq = q_tail_log(x);
        let step = (lq - ln_eps) * (lq - log_phi(x)).exp();
        x += step;
        if step.abs() <= 1e-15 * x.abs().max(1e-300) {
            break;
        }
    }
    x
}

/// Wichura's AS241 rational approximation of the upper quantile for tail mass
/// `p = e^{ln_p} <= 1/2`.
fn wichura(ln_p: f64) -> f64 {
    const A: [f64; 8] = [
        3.387_132_872_796_366_608,
        1.331_416_678_917_843_774_5e2,
        1.971_590_950_306_551_442_7e3,
        1.373_169_376_550_946_112_5e4,
        4.592_195_393_154_987_145_7e4,
        6.726_577_092_700_870_085_3e4,
        3.343_057_558_358_812_810_5e4,
        2.509_080_928_730_122_672_7e3,
    ];
    const B: [f64; 8] = [
        1.0,
        4.231_333_070_160_091_125_2e1,
        6.871_870_074_920_579_083e2,
        5.394_196_021_424_751_107_7e3,
        2.121_379_430_158_659_586_7e4,
        3.930_789_580_009_271_061e4,
        2.872_908_573_572_194_267_4e4,
        5.226_495_278_852_854_561e3,
    ];
    const C: [f64; 8] = [
        1.423_437_110_749_683_577_34,
        4.630_337_846_156_545_295_9,
        5.769_497_221_460_691_405_5,
        3.647_848_324_763_204_605_04,
        1.270_458_252_452_368_382_58,
        2.417_807_251_774_506_117_7e-1,
        2.272_384_498_926_918_458_33e-2,
        7.745_450_142_783_414_076_4e-4,
    ];
    const D: [f64; 8] = [
        1.0,
        2.053_191_626_637_758_821_87,
        1.676_384_830_183_803_849_4,
        6.897_673_349_851_000_045_5e-1,
        1.481_039_764_274_800_745_9e-1,
        1.519_866_656_361_645_719_66e-2,
        5.475_938_084_995_344_946e-4,
        1.050_750_071_644_416_843_24e-9,
    ];
    const E: [f64; 8] = [
        6.657_904_643_501_103_777_2,
        5.463_784_911_164_114_369_9,
        1.784_826_539_917_291_335_8,
        2.965_605_718_285_048_912_3e-1,
        2.653_218_952_657_612_309_3e-2,
        1.242_660_947_388_078_438_6e-3,
        2.711_555_568_743_487_578_15e-5,
        2.010_334_399_292_288_132_65e-7,
    ];
    const F: [f64; 8] = [
        1.0,
        5.998_322_065_558_879_376_9e-1,
        1.369_298_809_227_358_053_1e-1,
        1.487_536_129_085_061_485_25e-2,
        7.868_691_311_456_132_591e-4,
        1.846_318_317_510_054_681_8e-5,
        1.421_511_758_316_445_888_7e-7,
        2.044_263_103_389_939_785_64e-15,
    ];
    fn poly(c: &[f64; 8], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
    }
    let p = ln_p.exp();
    let q = 0.5 - p;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let r = (-ln_p).sqrt();
    if r <= 5.0 {
        let r = r - 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        let r = r - 5.0;
        poly(&E, r) / poly(&F, r)
    }
}
