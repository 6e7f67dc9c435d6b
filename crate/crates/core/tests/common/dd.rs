//! Double-double (~31 significant digits) reference evaluations of the
//! cylinder functions, straight from the ascending series definitions.
//!
//! This oracle exists to validate the production implementation from a
//! different direction: plain term-by-term series in compensated arithmetic,
//! no asymptotics, no recurrence tricks (except a compensated forward
//! recurrence for high-order Y). Useful for arguments up to ~30, where the
//! largest series term stays within the double-double error budget.

#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub const GAMMA: Dd = Dd { hi: 0.5772156649015329, lo: -4.942915152430645e-18 };
pub const LN2: Dd = Dd { hi: 0.6931471805599453, lo: 2.3190468138462996e-17 };

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let v = s - a;
        let e = (a - (s - v)) + (b - v);
        Dd { hi: s, lo: e }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        let e = a.mul_add(b, -p);
        Dd { hi: p, lo: e }
    }

    pub fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let lo = s.lo + self.lo + o.lo;
        let r = Dd::two_sum(s.hi, lo);
        Dd { hi: r.hi, lo: r.lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = Dd::two_prod(self.hi, o.hi);
        let lo = p.lo + self.hi * o.lo + self.lo * o.hi;
        let r = Dd::two_sum(p.hi, lo);
        Dd { hi: r.hi, lo: r.lo }
    }

    pub fn mul_f64(self, f: f64) -> Dd {
        let p = Dd::two_prod(self.hi, f);
        let lo = p.lo + self.lo * f;
        let r = Dd::two_sum(p.hi, lo);
        Dd { hi: r.hi, lo: r.lo }
    }

    pub fn div_f64(self, d: f64) -> Dd {
        let q0 = self.hi / d;
        let p = Dd::two_prod(q0, d);
        let r = (self.hi - p.hi) + (self.lo - p.lo);
        let q1 = r / d;
        Dd::two_sum(q0, q1)
    }

    pub fn div(self, o: Dd) -> Dd {
        let q0 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q0));
        let q1 = r.hi / o.hi;
        let r2 = r.sub(o.mul_f64(q1));
        let q2 = r2.hi / o.hi;
        Dd::two_sum(q0, q1).add(Dd::new(q2))
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn abs_hi(self) -> f64 {
        self.hi.abs()
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn ldexp(self, e: i32) -> Dd {
        let s = (e as f64).exp2();
        Dd { hi: self.hi * s, lo: self.lo * s }
    }

    /// exp(self) for |self| < 700 via reduction to [-ln2/2, ln2/2].
    pub fn exp(self) -> Dd {
        let m = (self.hi / LN2.hi).round();
        let r = self.sub(LN2.mul_f64(m));
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for k in 1..60 {
            term = term.mul(r).div_f64(k as f64);
            sum = sum.add(term);
            if term.abs_hi() < 1e-40 * sum.abs_hi() {
                break;
            }
        }
        sum.ldexp(m as i32)
    }

    /// ln(x) for x > 0: one Newton correction of the f64 logarithm.
    pub fn ln(x: f64) -> Dd {
        let hi = x.ln();
        let e = Dd::new(-hi).exp();
        let r = e.mul_f64(x).sub(Dd::ONE); // x e^{-hi} - 1, O(1e-16)
        let correction = r.sub(r.mul(r).mul_f64(0.5));
        Dd::new(hi).add(correction)
    }
}

/// J_n(x) by the ascending series, double-double throughout.
pub fn j_series(n: u32, x: f64) -> Dd {
    let q = Dd::two_prod(x, x).mul_f64(0.25);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for k in 1..400u64 {
        term = term.mul(q).div_f64(-((k * (k + n as u64)) as f64));
        sum = sum.add(term);
        if term.abs_hi() < 1e-40 * sum.abs_hi() {
            break;
        }
    }
    // (x/2)^n prefactor, exactly accumulated
    let half_x = Dd::new(x).mul_f64(0.5);
    let mut prefix = Dd::ONE;
    for _ in 0..n {
        prefix = prefix.mul(half_x);
    }
    // divide by n!
    for k in 1..=n as u64 {
        prefix = prefix.div_f64(k as f64);
    }
    sum.mul(prefix)
}

/// Y_0(x) from its series definition:
/// `(2/pi) [(ln(x/2) + gamma) J_0 + sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2]`.
pub fn y0_series(x: f64) -> Dd {
    let q = Dd::two_prod(x, x).mul_f64(0.25);
    let j0 = j_series(0, x);
    let mut t = Dd::ONE;
    let mut h = Dd::ZERO;
    let mut sum = Dd::ZERO;
    let mut sign = 1.0_f64;
    for k in 1..400u64 {
        t = t.mul(q).div_f64((k * k) as f64);
        h = h.add(Dd::ONE.div_f64(k as f64));
        sum = sum.add(t.mul(h).mul_f64(sign));
        sign = -sign;
        if t.abs_hi() * h.abs_hi() < 1e-40 * (sum.abs_hi() + 1e-300) {
            break;
        }
    }
    let log_half_x = Dd::ln(x).sub(LN2);
    let two_over_pi = Dd::new(2.0).div(Dd { hi: 3.141592653589793, lo: 1.2246467991473532e-16 });
    log_half_x.add(GAMMA).mul(j0).add(sum).mul(two_over_pi)
}

/// Y_1(x) from its series definition:
/// `-2/(pi x) + (2/pi) ln(x/2) J_1 - (x/(2 pi)) sum_k (-1)^k (H_k + H_{k+1} - 2 gamma) q^k / (k!(k+1)!)`.
pub fn y1_series(x: f64) -> Dd {
    let pi = Dd { hi: 3.141592653589793, lo: 1.2246467991473532e-16 };
    let q = Dd::two_prod(x, x).mul_f64(0.25);
    let j1 = j_series(1, x);
    let mut t = Dd::ONE;
    let mut hk = Dd::ZERO;
    let mut hk1 = Dd::ONE;
    let two_gamma = GAMMA.mul_f64(2.0);
    let mut sum = hk.add(hk1).sub(two_gamma);
    let mut sign = -1.0_f64;
    for k in 1..400u64 {
        t = t.mul(q).div_f64((k * (k + 1)) as f64);
        hk = hk.add(Dd::ONE.div_f64(k as f64));
        hk1 = hk1.add(Dd::ONE.div_f64((k + 1) as f64));
        sum = sum.add(hk.add(hk1).sub(two_gamma).mul(t).mul_f64(sign));
        sign = -sign;
        if t.abs_hi() * 4.0 < 1e-40 * (sum.abs_hi() + 1e-300) {
            break;
        }
    }
    let log_half_x = Dd::ln(x).sub(LN2);
    let first = Dd::new(-2.0).div(pi.mul_f64(x));
    let second = log_half_x.mul(j1).mul(Dd::new(2.0).div(pi));
    let third = sum.mul(Dd::new(x).div(pi.mul_f64(2.0))).neg();
    first.add(second).add(third)
}

/// Y_n(x) for n >= 2: compensated forward recurrence from the series
/// kernels (stable because Y grows with the order).
pub fn y_forward(n: u32, x: f64) -> Dd {
    let mut ym = y0_series(x);
    let mut y = y1_series(x);
    for k in 1..n {
        let next = y.mul_f64(2.0 * k as f64).div_f64(x).sub(ym);
        ym = y;
        y = next;
    }
    if n == 0 {
        ym
    } else {
        y
    }
}

