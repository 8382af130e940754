//! Integer-order Bessel functions of the first kind and modified Bessel
//! functions of the second kind.

use super::SpecfunError;

/// Ascending-series cutoff for `J_n`; above it Miller's backward recurrence
/// takes over.
const SERIES_LIMIT: f64 = 12.0;

/// Switch between the logarithmic series and the continued fraction for
/// `K_0`, `K_1`.
const K_SWITCH: f64 = 2.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Neumaier compensated summation.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

/// Bessel function of the first kind `J_n(x)` for `x >= 0`.
///
/// Negative arguments are accepted through the parity relation
/// `J_n(-x) = (-1)^n J_n(x)`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(n, -x);
        return if n.is_multiple_of(2) { v } else { -v };
    }
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x < SERIES_LIMIT {
        j_series(n, x)
    } else {
        j_miller(n, x)
    }
}

/// `J_n(x)` for signed order, `J_{-n} = (-1)^n J_n`.
pub fn bessel_j_signed(n: i32, x: f64) -> f64 {
    let v = bessel_j(n.unsigned_abs(), x);
    if n < 0 && n % 2 != 0 {
        -v
    } else {
        v
    }
}

/// `(J_n(x), J_{n+1}(x))` for `x >= 0`, sharing one evaluation.
pub fn bessel_j_pair(n: u32, x: f64) -> (f64, f64) {
    if x < 0.0 {
        let (a, b) = bessel_j_pair(n, -x);
        return if n.is_multiple_of(2) { (a, -b) } else { (-a, b) };
    }
    if x == 0.0 {
        return (if n == 0 { 1.0 } else { 0.0 }, 0.0);
    }
    if x < SERIES_LIMIT {
        j_series_pair(n, x)
    } else {
        (j_miller(n, x), j_miller(n + 1, x))
    }
}

fn j_series_pair(n: u32, x: f64) -> (f64, f64) {
    let half = 0.5 * x;
    let mut a = 1.0;
    for k in 1..=n {
        a *= half / k as f64;
    }
    let mut b = a * (half / (n + 1) as f64);
    let q = -half * half;
    let (mut sa, mut sb) = (Compensated::default(), Compensated::default());
    sa.add(a);
    sb.add(b);
    let mut k = 1u32;
    loop {
        let kf = k as f64;
        a *= q / (kf * (k + n) as f64);
        b *= q / (kf * (k + n + 1) as f64);
        sa.add(a);
        sb.add(b);
        if a.abs() <= 1e-18 * sa.value().abs() && b.abs() <= 1e-18 * sb.value().abs() && kf > half {
            break;
        }
        k += 1;
        if k > 200 {
            break;
        }
    }
    (sa.value(), sb.value())
}

fn j_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let q = -half * half;
    let mut acc = Compensated::default();
    acc.add(term);
    let mut k = 1u32;
    loop {
        term *= q / (k as f64 * (k + n) as f64);
        acc.add(term);
        if term.abs() <= 1e-18 * acc.value().abs() && k as f64 > half {
            break;
        }
        k += 1;
        if k > 200 {
            break;
        }
    }
    acc.value()
}

/// Miller's backward recurrence normalised with `J_0 + 2 Σ J_{2k} = 1`.
fn j_miller(n: u32, x: f64) -> f64 {
    let start = {
        let base = (x.max(n as f64) + 30.0 + (40.0 * x.max(n as f64)).sqrt()) as u32;
        base + base % 2
    };
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut norm = 0.0;
    let mut wanted = 0.0;
    let mut k = start;
    while k > 0 {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        k -= 1;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
        if k == n {
            wanted = cur;
        }
        if k % 2 == 0 && k > 0 {
            norm += 2.0 * cur;
        }
    }
    if n == 0 {
        wanted = cur;
    }
    norm += cur;
    wanted / norm
}

/// Modified Bessel function of the second kind `K_n(x)`, `x > 0`.
pub fn bessel_k(n: u32, x: f64) -> Result<f64, SpecfunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain {
            function: "bessel_k",
            argument: x,
        });
    }
    let (k0, k1) = k01(x);
    Ok(match n {
        0 => k0,
        1 => k1,
        _ => {
            let (mut km, mut kc) = (k0, k1);
            for j in 1..n {
                let kn = km + 2.0 * j as f64 / x * kc;
                km = kc;
                kc = kn;
            }
            kc
        }
    })
}

/// `(K_n(x), K_{n+1}(x))`, `x > 0`.
pub fn bessel_k_pair(n: u32, x: f64) -> Result<(f64, f64), SpecfunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain {
            function: "bessel_k",
            argument: x,
        });
    }
    let (mut km, mut kc) = k01(x);
    for j in 1..=n {
        let kn = km + 2.0 * j as f64 / x * kc;
        km = kc;
        kc = kn;
    }
    Ok((km, kc))
}

/// `K_n(x)` for signed order; `K_{-n} = K_n`.
pub fn bessel_k_signed(n: i32, x: f64) -> Result<f64, SpecfunError> {
    bessel_k(n.unsigned_abs(), x)
}

/// `(K_0(x), K_1(x))` for `x > 0`.
fn k01(x: f64) -> (f64, f64) {
    if x <= K_SWITCH {
        k01_series(x)
    } else {
        k01_continued_fraction(x)
    }
}

fn k01_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    // K_0 = -(ln(x/2) + γ) I_0 + Σ q^k/(k!)^2 H_k
    // K_1 = 1/x + ln(x/2) I_1 - (x/4) Σ (ψ(k+1) + ψ(k+2)) q^k/(k!(k+1)!)
    let mut i0 = Compensated::default();
    let mut i1 = Compensated::default();
    let mut s0 = Compensated::default();
    let mut s1 = Compensated::default();

    let mut t0 = 1.0; // q^k / (k!)^2
    let mut t1 = 1.0; // q^k / (k!(k+1)!)
    let mut harmonic = 0.0; // H_k
    for k in 0..60u32 {
        if k > 0 {
            let kf = k as f64;
            t0 *= q / (kf * kf);
            t1 *= q / (kf * (kf + 1.0));
            harmonic += 1.0 / kf;
        }
        let psi1 = -EULER_GAMMA + harmonic;
        let psi2 = psi1 + 1.0 / (k as f64 + 1.0);
        i0.add(t0);
        i1.add(t1);
        s0.add(t0 * harmonic);
        s1.add(t1 * (psi1 + psi2));
        if t0 < 1e-18 && k > 2 {
            break;
        }
    }
    let i1 = 0.5 * x * i1.value();
    let k0 = -(log_half + EULER_GAMMA) * i0.value() + s0.value();
    let k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1.value();
    (k0, k1)
}

/// Steed's continued fraction (Temme's CF2) for `K_0`, `K_1` at `x > 2`.
fn k01_continued_fraction(x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-17;
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000u32 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}
