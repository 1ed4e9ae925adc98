//! Exact convolution powers via number-theoretic transforms.
//!
//! The weighted count vector is the coefficient vector of
//! `P(x)^m, P(x) = Σ_i w_i x^{δ_i}`. The direct pass is quadratic in `m`;
//! for large grids this backend instead works modulo a set of word-size
//! primes `p ≡ 1 (mod N)`, `N` a power of two at least the support size:
//! evaluate `P` at the `N`-th roots of unity mod `p` (the base polynomial
//! has only `ℓ` terms, so a geometric sweep beats a full transform), raise
//! the evaluations pointwise to the `m`-th power, and interpolate back with
//! one inverse transform. The integer coefficients are reconstructed
//! incrementally by the Chinese remainder theorem.
//!
//! Exactness does not depend on luck: every coefficient is bounded by the
//! total mass `(Σ_i w_i)^m`, primes are accumulated until their product
//! strictly exceeds that bound, and the caller re-checks total mass on the
//! reconstructed counts.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Largest prime allowed; keeps every Montgomery intermediate inside u128.
const PRIME_LIMIT: u64 = 1 << 62;

/// Largest transform size the auto heuristic will pick.
const MAX_AUTO_TRANSFORM: usize = 1 << 22;

/// Direct-pass cost (in rough limb operations) above which the modular
/// backend wins. Calibrated on the direct backend's measured throughput.
const DIRECT_COST_CUTOFF: f64 = 2.0e8;

/// Decides whether the modular backend is worth it for this workload.
pub(crate) fn worthwhile(terms: usize, span: usize, m: u32, total_weight: u64, cells: usize) -> bool {
    if terms < 2 || m < 8 {
        return false;
    }
    let n = cells.next_power_of_two();
    if n > MAX_AUTO_TRANSFORM {
        return false;
    }
    // Direct pass: ~ ℓ·span·m²/2 cell updates, each touching on the order of
    // half the final limb count.
    let mf = m as f64;
    let final_limbs = mf * libm::log2(total_weight as f64) / 64.0 + 1.0;
    let direct_cost = terms as f64 * span as f64 * mf * mf / 2.0 * (final_limbs / 2.0 + 1.0);
    direct_cost > DIRECT_COST_CUTOFF
}

/// Coefficients of `(Σ_i w_i x^{δ_i})^m`, dense over `0..cells`; identical
/// to the direct backend's output.
///
/// `coeff_bound` must be an upper bound for every coefficient (the caller
/// passes the total mass `(Σ w_i)^m`).
pub(crate) fn convolve_power(
    weights: &[u64],
    deltas: &[usize],
    m: u32,
    cells: usize,
    coeff_bound: &BigUint,
) -> Vec<BigUint> {
    let n = cells.next_power_of_two().max(2);
    let primes = transform_primes(n as u64, coeff_bound);

    let mut counts = vec![BigUint::zero(); cells];
    let mut modulus = BigUint::one();
    let mut residues = vec![0u64; n];

    for &p in &primes {
        let mont = Mont::new(p);
        let omega = root_of_unity(&mont, n as u64);

        // Y[j] = P(ω^j), built per term as a geometric sweep.
        residues.fill(0);
        for (&w, &d) in weights.iter().zip(deltas) {
            let ratio = mont.pow(omega, d as u64);
            let mut value = mont.to_mont(w % p);
            for slot in residues.iter_mut() {
                *slot = mont.add(*slot, value);
                value = mont.mul(value, ratio);
            }
        }
        // Pointwise power, then one inverse transform.
        for slot in residues.iter_mut() {
            *slot = mont.pow(*slot, m as u64);
        }
        let omega_inv = mont.inv(omega);
        ntt(&mut residues, omega_inv, &mont);
        let n_inv = mont.inv(mont.to_mont(n as u64 % p));

        // Fold this prime's residues into the accumulated counts (Garner).
        let modulus_mod_p = biguint_mod_u64(&modulus, p);
        let modulus_inv = mont.inv(mont.to_mont(modulus_mod_p));
        for (slot, count) in residues[..cells].iter().zip(counts.iter_mut()) {
            let residue = mont.from_mont(mont.mul(*slot, n_inv));
            let seen = biguint_mod_u64(count, p);
            let diff = if residue >= seen {
                residue - seen
            } else {
                residue + p - seen
            };
            if diff != 0 {
                let carry = mont.from_mont(mont.mul(mont.to_mont(diff), modulus_inv));
                *count += &modulus * carry;
            }
        }
        modulus *= p;
    }
    counts
}

fn biguint_mod_u64(value: &BigUint, p: u64) -> u64 {
    (value % p).to_u64().expect("residue fits u64")
}

/// Primes `p = k·n + 1 ≤ 2^62` (descending `k`) until their product
/// strictly exceeds `bound`.
fn transform_primes(n: u64, bound: &BigUint) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut product = BigUint::one();
    let mut k = (PRIME_LIMIT - 1) / n;
    while product <= *bound {
        let candidate = loop {
            debug_assert!(k > 0, "ran out of transform primes");
            let p = k * n + 1;
            k -= 1;
            if is_prime(p) {
                break p;
            }
        };
        primes.push(candidate);
        product *= candidate;
    }
    primes
}

/// In-place transform: `a[t] ← Σ_j a[j]·root^{j·t}` for `t = 0..n`, with
/// `root` a primitive `n`-th root of unity in Montgomery form.
fn ntt(a: &mut [u64], root: u64, mont: &Mont) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let stride_root = mont.pow(root, (n / len) as u64);
        let half = len / 2;
        let mut start = 0;
        while start < n {
            let mut w = mont.one();
            for k in start..start + half {
                let u = a[k];
                let v = mont.mul(a[k + half], w);
                a[k] = mont.add(u, v);
                a[k + half] = mont.sub(u, v);
                w = mont.mul(w, stride_root);
            }
            start += len;
        }
        len <<= 1;
    }
}

/// Element of order exactly `n` (a power of two dividing `p − 1`), in
/// Montgomery form.
fn root_of_unity(mont: &Mont, n: u64) -> u64 {
    debug_assert!((mont.p - 1) % n == 0);
    if n == 1 {
        return mont.one();
    }
    let exponent = (mont.p - 1) / n;
    let mut base = 2u64;
    loop {
        let candidate = mont.pow(mont.to_mont(base), exponent);
        if mont.pow(candidate, n / 2) != mont.one() {
            return candidate;
        }
        base += 1;
    }
}

/// Montgomery arithmetic modulo an odd prime `p < 2^62`.
struct Mont {
    p: u64,
    /// `-p^{-1} mod 2^64`.
    neg_inv: u64,
    /// `2^128 mod p`, for conversion into Montgomery form.
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        debug_assert!(p % 2 == 1 && p < PRIME_LIMIT);
        // Newton iteration doubles the valid bits each round.
        let mut inv: u64 = p;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        debug_assert_eq!(p.wrapping_mul(inv), 1);
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Mont {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    /// REDC(a·b); valid whenever `a·b < p·2^64`.
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let reduced = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if reduced >= self.p {
            reduced - self.p
        } else {
            reduced
        }
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn to_mont(&self, x: u64) -> u64 {
        self.mul(x, self.r2)
    }

    fn from_mont(&self, x: u64) -> u64 {
        self.mul(x, 1)
    }

    fn one(&self) -> u64 {
        self.to_mont(1)
    }

    fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = self.one();
        let mut base = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1u64 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, n);
        }
        base = mulmod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the witness set is complete for u64.
fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let trailing = (n - 1).trailing_zeros();
    let odd = (n - 1) >> trailing;
    'witness: for &w in &WITNESSES {
        let mut x = powmod(w, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..trailing {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
