//! Bessel function of the first kind, order one.
//!
//! Power series (accumulated in double-double arithmetic to survive the
//! alternating cancellation) for |x| <= 12, Hankel asymptotic expansion with
//! optimal truncation beyond.

use crate::scalar::Scalar;

/// Series/asymptotic switchover.
pub const SEAM: f64 = 12.0;

pub fn j1<T: Scalar>(x: T) -> T {
    T::of(j1_f64(x.f64()))
}

pub fn j1_f64(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SEAM { j1_series(ax) } else { j1_asymptotic(ax) };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `2 J1(x) / x`, finite at zero (value 1).
pub fn jinc_f64(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-4 {
        let q = ax * ax / 4.0;
        return 1.0 - q / 2.0 + q * q / 12.0;
    }
    2.0 * j1_f64(ax) / ax
}

#[derive(Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd(s, (a - (s - bb)) + (b - bb))
    }
    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.0, o.0);
        let t = s.1 + self.1 + o.1;
        Dd::two_sum(s.0, t)
    }
    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        let e = e + self.0 * o.1 + self.1 * o.0;
        Dd::two_sum(p, e)
    }
    fn div_f(self, d: f64) -> Dd {
        let q = self.0 / d;
        let r = Dd(q, 0.0).mul(Dd(d, 0.0));
        let rem = Dd::two_sum(self.0, -r.0).0 - r.1 + self.1;
        Dd::two_sum(q, rem / d)
    }
}

/// Series J1(x) = sum_k (-1)^k (x/2)^{2k+1} / (k! (k+1)!).
pub fn j1_series(x: f64) -> f64 {
    let h = Dd(x * 0.5, 0.0);
    let q = h.mul(h);
    let mut term = h;
    let mut sum = term;
    for k in 0..200usize {
        let kf = k as f64;
        term = Dd(-term.0, -term.1).mul(q).div_f((kf + 1.0) * (kf + 2.0));
        let next = sum.add(term);
        if term.0.abs() <= 1e-34 * sum.0.abs().max(1e-300) {
            sum = next;
            break;
        }
        sum = next;
    }
    sum.0 + sum.1
}

/// Hankel expansion J1(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi),
/// chi = x - 3pi/4, truncated at the smallest term.
pub fn j1_asymptotic(x: f64) -> f64 {
    let mu = 4.0;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0f64;
    let mut prev = f64::INFINITY;
    let mut xk = 1.0f64;
    for k in 0..80usize {
        if k > 0 {
            let kk = (2 * k - 1) as f64;
            a *= (mu - kk * kk) / (k as f64 * 8.0);
            xk *= x;
        }
        let t = a / xk;
        if t.abs() > prev || t == 0.0 {
            break;
        }
        prev = t.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
        if t.abs() < 1e-18 {
            break;
        }
    }
    // cos(x - 3pi/4) = (sin x - cos x)/sqrt2, sin(x - 3pi/4) = -(sin x + cos x)/sqrt2.
    let (s, c) = x.sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let cos_chi = (s - c) * r;
    let sin_chi = -(s + c) * r;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed to 30 digits with mpmath.besselj(1, x).
    const REF: [(f64, f64); 7] = [
        (0.5, 0.242_268_457_674_873_9),
        (1.0, 0.440_050_585_744_933_5),
        (3.0 * std::f64::consts::PI / 2.0, -0.281_657_908_750_519_6),
        (10.0, 0.043_472_746_168_861_44),
        (12.0, -0.223_447_104_490_627_7),
        (25.0, -0.125_350_249_580_289_9),
        (1000.0, 0.004_728_311_907_089_523),
    ];

    #[test]
    fn matches_reference_values() {
        for (x, v) in REF {
            assert!((j1_f64(x) - v).abs() < 1e-14, "x={x}: {} vs {v}", j1_f64(x));
        }
    }

    #[test]
    fn seam_agreement() {
        for d in [-1e-9, 0.0, 1e-9] {
            let x = SEAM + d;
            assert!((j1_series(x) - j1_asymptotic(x)).abs() <= 1e-12);
        }
    }

    #[test]
    fn odd_and_jinc_limit() {
        assert_eq!(j1_f64(-2.5), -j1_f64(2.5));
        assert!((jinc_f64(0.0) - 1.0).abs() < 1e-16);
        assert!((jinc_f64(1e-4) - 2.0 * j1_series(1e-4) / 1e-4).abs() < 1e-15);
    }
}
