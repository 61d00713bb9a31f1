//! Complex Gamma function (Lanczos approximation with reflection).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

// Godfrey's coefficient set for g = 607/128.
const LANCZOS_G: f64 = 607.0 / 128.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

fn nonpositive_integer(w: Complex64) -> bool {
    w.im == 0.0 && w.re <= 0.0 && w.re == w.re.round()
}

/// `sin(pi w)` with the real part reduced modulo 2 first, so integer
/// real parts give exact zeros.
pub fn sin_pi(w: Complex64) -> Complex64 {
    let mut a = w.re % 2.0;
    if a > 1.0 {
        a -= 2.0;
    } else if a < -1.0 {
        a += 2.0;
    }
    let (s, c) = if a == 0.0 || a.abs() == 1.0 {
        (0.0, if a == 0.0 { 1.0 } else { -1.0 })
    } else if a.abs() == 0.5 {
        (a.signum(), 0.0)
    } else {
        (PI * a).sin_cos()
    };
    let b = PI * w.im;
    Complex64::new(s * b.cosh(), c * b.sinh())
}

fn lanczos(w: Complex64) -> Complex64 {
    let z = w - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * series
}

/// `Γ(w)` for complex `w`; poles at the non-positive integers are errors.
pub fn complex_gamma(w: Complex64) -> Result<Complex64> {
    if nonpositive_integer(w) {
        return Err(Error::Pole { what: "Gamma", at: w });
    }
    if w.re < 0.5 {
        Ok(PI / (sin_pi(w) * lanczos(Complex64::new(1.0, 0.0) - w)))
    } else {
        Ok(lanczos(w))
    }
}

/// `1/Γ(w)`, an entire function: exactly zero at the non-positive integers.
pub fn reciprocal_gamma(w: Complex64) -> Complex64 {
    if w.re < 0.5 {
        sin_pi(w) * lanczos(Complex64::new(1.0, 0.0) - w) / PI
    } else {
        lanczos(w).inv()
    }
}
