//! Truncated multivariate Taylor jets in the four spacetime coordinates.
//!
//! A jet of order `k` stores the Taylor coefficients `c_m = ∂^m f / m!` of a
//! function at a point for every multi-index `m = (m_t, m_1, m_2, m_3)` with
//! `|m| ≤ k`. Monomials are ordered by total degree, so truncating to a lower
//! order is a prefix slice.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

/// Highest jet order supported by the cached layouts.
pub const MAX_ORDER: usize = 8;

/// Number of spacetime variables: `t, x¹, x², x³`.
pub const NVARS: usize = 4;

struct Layout {
    exps: Vec<[u8; NVARS]>,
    index: HashMap<[u8; NVARS], usize>,
    /// `(a, b, c)` with `exps[a] + exps[b] = exps[c]`, restricted to `|c| ≤ order`.
    products: Vec<(u32, u32, u32)>,
}

fn layouts() -> &'static [Layout] {
    static LAYOUTS: OnceLock<Vec<Layout>> = OnceLock::new();
    LAYOUTS.get_or_init(|| (0..=MAX_ORDER).map(Layout::new).collect())
}

impl Layout {
    fn new(order: usize) -> Self {
        let mut exps = Vec::new();
        for deg in 0..=order {
            for a in (0..=deg).rev() {
                for b in (0..=deg - a).rev() {
                    for c in (0..=deg - a - b).rev() {
                        let d = deg - a - b - c;
                        exps.push([a as u8, b as u8, c as u8, d as u8]);
                    }
                }
            }
        }
        let index: HashMap<_, _> = exps.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut products = Vec::new();
        for (ia, ea) in exps.iter().enumerate() {
            let da: usize = ea.iter().map(|&v| v as usize).sum();
            for (ib, eb) in exps.iter().enumerate() {
                let db: usize = eb.iter().map(|&v| v as usize).sum();
                if da + db > order {
                    continue;
                }
                let ec = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                products.push((ia as u32, ib as u32, index[&ec] as u32));
            }
        }
        Layout {
            exps,
            index,
            products,
        }
    }
}

/// Number of Taylor coefficients of a jet of the given order.
pub fn jet_len(order: usize) -> usize {
    // C(order + 4, 4)
    (order + 1) * (order + 2) * (order + 3) * (order + 4) / 24
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    order: usize,
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(order: usize, value: f64) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut coeffs = vec![0.0; jet_len(order)];
        coeffs[0] = value;
        Jet { order, coeffs }
    }

    /// The coordinate function `var` (0 = t, 1..=3 = xⁱ) expanded at `value`.
    pub fn variable(order: usize, var: usize, value: f64) -> Self {
        let mut jet = Jet::constant(order, value);
        if order >= 1 {
            jet.coeffs[1 + var] = 1.0;
        }
        jet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Partial derivative `∂^m f` at the expansion point.
    pub fn derivative(&self, m: [u8; NVARS]) -> f64 {
        let deg: usize = m.iter().map(|&v| v as usize).sum();
        if deg > self.order {
            return f64::NAN;
        }
        let idx = layouts()[self.order].index[&m];
        let fact: f64 = m.iter().map(|&v| factorial(v as usize)).product();
        self.coeffs[idx] * fact
    }

    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order);
        Jet {
            order,
            coeffs: self.coeffs[..jet_len(order)].to_vec(),
        }
    }

    /// `∂_var` of the jet; the result has one order less.
    pub fn diff(&self, var: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let lo = &layouts()[self.order - 1];
        let hi = &layouts()[self.order];
        let coeffs = lo
            .exps
            .iter()
            .map(|e| {
                let mut up = *e;
                up[var] += 1;
                (up[var] as f64) * self.coeffs[hi.index[&up]]
            })
            .collect();
        Jet {
            order: self.order - 1,
            coeffs,
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `f(g)` for a univariate `f` given its derivatives `f^{(k)}(g₀)`, `k = 0..=order`.
    pub fn compose(&self, derivs: &[f64]) -> Jet {
        assert!(derivs.len() > self.order);
        let mut h = self.clone();
        h.coeffs[0] = 0.0;
        let mut out = Jet::constant(self.order, derivs[0]);
        let mut power = Jet::constant(self.order, 1.0);
        let mut fact = 1.0;
        for (k, d) in derivs.iter().enumerate().take(self.order + 1).skip(1) {
            power = &power * &h;
            fact *= k as f64;
            let s = d / fact;
            for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                *o += s * p;
            }
        }
        out
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&vec![e; self.order + 1])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        self.compose(&(0..=self.order).map(|k| cycle[k % 4]).collect::<Vec<_>>())
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        self.compose(&(0..=self.order).map(|k| cycle[k % 4]).collect::<Vec<_>>())
    }

    /// Real power `g^p`; requires `g₀ > 0` unless `p` is a non-negative integer.
    pub fn powf(&self, p: f64) -> Jet {
        let g0 = self.value();
        let mut derivs = Vec::with_capacity(self.order + 1);
        let mut coef = 1.0;
        for k in 0..=self.order {
            derivs.push(coef * g0.powf(p - k as f64));
            coef *= p - k as f64;
        }
        self.compose(&derivs)
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Jet {
        self.powf(-1.0)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn common_order(a: &Jet, b: &Jet) -> usize {
    a.order.min(b.order)
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let order = common_order(self, rhs);
        let n = jet_len(order);
        Jet {
            order,
            coeffs: (0..n).map(|i| self.coeffs[i] + rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let order = common_order(self, rhs);
        let n = jet_len(order);
        Jet {
            order,
            coeffs: (0..n).map(|i| self.coeffs[i] - rhs.coeffs[i]).collect(),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let order = common_order(self, rhs);
        let layout = &layouts()[order];
        let mut coeffs = vec![0.0; jet_len(order)];
        for &(a, b, c) in &layout.products {
            coeffs[c as usize] += self.coeffs[a as usize] * rhs.coeffs[b as usize];
        }
        Jet { order, coeffs }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        &self * &rhs
    }
}
