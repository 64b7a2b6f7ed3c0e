//! Dense polynomials over the prime field F_p, used only to find moduli.

/// Coefficients constant-first, reduced mod p, no trailing zeros.
pub(crate) type FpPoly = Vec<u64>;

fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> FpPoly {
    let mut r: FpPoly = a.to_vec();
    let dm = m.len() - 1;
    let lc_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lc_inv % p;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p - c * mi % p) % p;
            }
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, m, p)
}

fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> FpPoly {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// Ben-Or test: f of degree k is irreducible iff gcd(x^{p^i} − x, f) = 1
/// for every 1 ≤ i ≤ k/2.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x: FpPoly = vec![0, 1];
    let mut power = rem(&x, f, p);
    for _ in 1..=k / 2 {
        power = pow_mod(&power, p, f, p);
        let g = gcd(f, &sub(&power, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree k, comparing coefficient vectors
/// lexicographically from the constant term upward.
pub(crate) fn smallest_irreducible(p: u64, k: u32) -> FpPoly {
    let k = k as usize;
    let total = p.pow(k as u32);
    for t in 0..total {
        // c_0 is the most significant digit so that t ascends lexicographically.
        let mut coeffs = vec![0u64; k + 1];
        let mut rest = t;
        for i in (0..k).rev() {
            coeffs[i] = rest % p;
            rest /= p;
        }
        coeffs[k] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
