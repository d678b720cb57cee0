//! Finite fields GF(q) for prime powers q, with discrete logarithms.
//!
//! Elements are encoded as integers `0..q`: for q = p^k the code of
//! `c_0 + c_1 a + ... + c_{k-1} a^{k-1}` is `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`,
//! where `a` is a root of the Conway polynomial. Prime fields use residues
//! directly.

use crate::error::Error;

/// Conway polynomials for the non-prime prime powers below 100, as
/// (p, k, coefficients c_0..c_{k-1} of the monic polynomial).
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 1, 1, 0]),
    (3, 2, &[2, 2]),
    (3, 3, &[1, 2, 0]),
    (3, 4, &[2, 0, 0, 2]),
    (5, 2, &[2, 4]),
    (7, 2, &[3, 6]),
];

/// Splits `q` as `p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p as u32, k))
}

/// GF(q) with log/antilog tables.
#[derive(Clone, Debug)]
pub struct FiniteField {
    q: u32,
    p: u32,
    k: u32,
    add: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn new(q: u64) -> Result<Self, Error> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > 1 << 16 {
            return Err(Error::Unsupported(format!("field order {q} is too large")));
        }
        let q = q as u32;
        let modulus: Vec<u32> = if k == 1 {
            vec![]
        } else {
            CONWAY
                .iter()
                .find(|(cp, ck, _)| *cp == p && *ck == k)
                .map(|(_, _, c)| c.to_vec())
                .ok_or_else(|| Error::Unsupported(format!("no Conway polynomial for GF({q})")))?
        };

        let digits = |x: u32| -> Vec<u32> {
            let mut d = Vec::with_capacity(k as usize);
            let mut x = x;
            for _ in 0..k {
                d.push(x % p);
                x /= p;
            }
            d
        };
        let encode = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let mut add = vec![0u32; (q * q) as usize];
        for x in 0..q {
            let dx = digits(x);
            for y in 0..q {
                let dy = digits(y);
                let s: Vec<u32> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
                add[(x * q + y) as usize] = encode(&s);
            }
        }

        let mul_slow = |x: u32, y: u32| -> u32 {
            if k == 1 {
                return ((x as u64 * y as u64) % p as u64) as u32;
            }
            let (dx, dy) = (digits(x), digits(y));
            let mut prod = vec![0u32; 2 * k as usize];
            for (i, a) in dx.iter().enumerate() {
                for (j, b) in dy.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + a * b) % p;
                }
            }
            // reduce with x^k = -(c_0 + ... + c_{k-1} x^{k-1})
            for deg in (k as usize..prod.len()).rev() {
                let c = prod[deg];
                if c == 0 {
                    continue;
                }
                prod[deg] = 0;
                for (i, m) in modulus.iter().enumerate() {
                    let idx = deg - k as usize + i;
                    prod[idx] = (prod[idx] + (p - c) * m) % p;
                }
            }
            encode(&prod[..k as usize])
        };

        // Smallest primitive element by code.
        let order = q - 1;
        let mut exp = Vec::new();
        for g in 2..q.max(3) {
            if q == 2 {
                break;
            }
            let mut powers = vec![1u32];
            let mut x = g;
            while x != 1 {
                powers.push(x);
                x = mul_slow(x, g);
                if powers.len() > order as usize {
                    break;
                }
            }
            if powers.len() == order as usize {
                exp = powers;
                break;
            }
        }
        if q == 2 {
            exp = vec![1];
        }
        assert_eq!(exp.len(), order as usize, "no primitive element found for GF({q})");
        let mut log = vec![u32::MAX; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        Ok(FiniteField { q, p, k, add, exp, log })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Code of the fixed primitive element.
    pub fn primitive_element(&self) -> u32 {
        if self.q == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    pub fn add(&self, x: u32, y: u32) -> u32 {
        self.add[(x * self.q + y) as usize]
    }

    pub fn neg(&self, x: u32) -> u32 {
        (0..self.q).find(|&y| self.add(x, y) == 0).unwrap()
    }

    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[x as usize] + self.log[y as usize]) % n) as usize]
    }

    pub fn inv(&self, x: u32) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[x as usize]) % n) as usize])
    }

    /// Discrete log base the primitive element, for nonzero `x`.
    pub fn log(&self, x: u32) -> Option<u32> {
        (x != 0).then(|| self.log[x as usize])
    }

    /// `w^e` for the primitive element `w`.
    pub fn pow_primitive(&self, e: i64) -> u32 {
        let n = (self.q - 1) as i64;
        self.exp[e.rem_euclid(n) as usize]
    }

    /// Coefficients `c_0..c_{k-1}` of an element code.
    pub fn coefficients(&self, x: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.k as usize);
        let mut x = x;
        for _ in 0..self.k {
            d.push(x % self.p);
            x /= self.p;
        }
        d
    }

    /// Human-readable form: signed residues for prime fields, polynomials in
    /// `a` otherwise.
    pub fn display(&self, x: u32) -> String {
        if self.k == 1 {
            let p = self.p as i64;
            let v = x as i64;
            return if v > p / 2 { (v - p).to_string() } else { v.to_string() };
        }
        let coeffs = self.coefficients(x);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}a^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Determinant of a square matrix over the field.
    pub fn determinant(&self, m: &[Vec<u32>]) -> u32 {
        let n = m.len();
        let mut a: Vec<Vec<u32>> = m.to_vec();
        let mut det = 1u32;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| a[i][c] != 0) else {
                return 0;
            };
            if p != c {
                a.swap(p, c);
                det = self.neg(det);
            }
            det = self.mul(det, a[c][c]);
            let inv = self.inv(a[c][c]).unwrap();
            for i in c + 1..n {
                if a[i][c] == 0 {
                    continue;
                }
                let f = self.mul(a[i][c], inv);
                for j in c..n {
                    let t = self.mul(f, a[c][j]);
                    a[i][j] = self.sub(a[i][j], t);
                }
            }
        }
        det
    }
}
