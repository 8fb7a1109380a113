//! Exact combinatorics: the Minkowski run-length conjugacy, Sturmian words
//! W_{p/q} with their integer Möbius matrices, and the Yoccoz disk families
//! in the τ = log(multiplier) plane.

use std::f64::consts::TAU;

use num_bigint::{BigInt, BigUint};

use crate::corr::Cx;
use crate::error::{Error, Result};

const PRECISION_CAP: u32 = 4096;

/// A canonical continued fraction [x0; x1, x2, ...], optionally with a
/// periodic tail (quadratic irrationals). Canonical form: the last partial of
/// a finite expansion is >= 2 unless there are no partials at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub x0: u32,
    pub partials: Vec<u32>,
    pub periodic_tail: Option<Vec<u32>>,
}

impl ContinuedFraction {
    pub fn new(x0: u32, partials: Vec<u32>, periodic_tail: Option<Vec<u32>>) -> Result<Self> {
        if partials.contains(&0) {
            return Err(Error::BadContinuedFraction("partials must be positive".into()));
        }
        if let Some(tail) = &periodic_tail {
            if tail.is_empty() || tail.contains(&0) {
                return Err(Error::BadContinuedFraction(
                    "periodic tail must be nonempty and positive".into(),
                ));
            }
        } else if partials.last() == Some(&1) && !partials.is_empty() {
            return Err(Error::BadContinuedFraction(
                "last partial of a finite expansion must be >= 2".into(),
            ));
        }
        Ok(Self { x0, partials, periodic_tail })
    }

    pub fn integer(x0: u32) -> Self {
        Self { x0, partials: Vec::new(), periodic_tail: None }
    }

    /// Partial quotient at index i >= 1 (x_i), unrolling the periodic tail;
    /// None once a finite expansion is exhausted.
    fn partial(&self, i: usize) -> Option<u32> {
        if i == 0 {
            return Some(self.x0);
        }
        let k = i - 1;
        if k < self.partials.len() {
            return Some(self.partials[k]);
        }
        let tail = self.periodic_tail.as_ref()?;
        Some(tail[(k - self.partials.len()) % tail.len()])
    }

    /// The map x -> x + 1 on expansions: increments x0.
    pub fn plus_one(&self) -> Self {
        Self {
            x0: self.x0 + 1,
            partials: self.partials.clone(),
            periodic_tail: self.periodic_tail.clone(),
        }
    }

    /// The map x -> x/(x+1) on expansions. For x0 >= 1 this prepends
    /// [0; 1, x0, ...]; for x0 = 0 it turns [0; x1, ...] into [0; x1+1, ...].
    pub fn over_x_plus_one(&self) -> Self {
        if self.x0 >= 1 {
            let mut partials = Vec::with_capacity(self.partials.len() + 2);
            partials.push(1);
            partials.push(self.x0);
            partials.extend_from_slice(&self.partials);
            canonicalized(0, partials, self.periodic_tail.clone())
        } else if !self.partials.is_empty() {
            let mut partials = self.partials.clone();
            partials[0] += 1;
            canonicalized(0, partials, self.periodic_tail.clone())
        } else if let Some(tail) = &self.periodic_tail {
            // [0; (t1..tk)] -> [0; t1+1, t2..tk, (t1..tk)]
            let mut partials = vec![tail[0] + 1];
            partials.extend_from_slice(&tail[1..]);
            Self { x0: 0, partials, periodic_tail: Some(tail.clone()) }
        } else {
            // x = 0 maps to 0.
            Self::integer(0)
        }
    }
}

fn canonicalized(x0: u32, mut partials: Vec<u32>, tail: Option<Vec<u32>>) -> ContinuedFraction {
    if tail.is_none() {
        // [..., a, 1] == [..., a+1]
        while partials.last() == Some(&1) && partials.len() >= 2 {
            partials.pop();
            *partials.last_mut().unwrap() += 1;
        }
    }
    ContinuedFraction { x0, partials, periodic_tail: tail }
}

/// A dyadic rational numerator/2^bits in [0, 1] at fixed precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    pub numerator: BigUint,
    pub bits: u32,
}

impl Dyadic {
    pub fn to_f64(&self) -> f64 {
        // Keep the top 64 bits for the conversion.
        let shift = self.bits.saturating_sub(64);
        let top: BigUint = &self.numerator >> shift;
        let top_u = top.to_u64_digits().first().copied().unwrap_or(0);
        top_u as f64 / 2f64.powi((self.bits - shift) as i32)
    }
}

/// The Minkowski-style homeomorphism h: the binary expansion with x0 ones,
/// x1 zeros, x2 ones, ..., truncated to `precision_bits`.
///
/// A finite expansion [x0; x1, ..., xn] is read as its two-sided limit: when
/// the last run prints zeros the expansion continues with ones forever
/// ([0;2] is 0.00111... = 0.01, matching h(1/2) = h(1)/2), and when it
/// prints ones the trailing zeros are exact.
pub fn minkowski_h(cf: &ContinuedFraction, precision_bits: u32) -> Result<Dyadic> {
    if precision_bits > PRECISION_CAP {
        return Err(Error::PrecisionOverflow(precision_bits));
    }
    let mut numerator = BigUint::ZERO;
    let mut emitted: u32 = 0;
    let mut i = 0usize;
    let mut ones = true;
    while emitted < precision_bits {
        let Some(run) = cf.partial(i) else {
            // Finite expansion exhausted at run index i-1: fill with the
            // alternate digit when the last run printed zeros (carry limit),
            // otherwise with zeros (exact).
            let fill_ones = ones; // parity already flipped past the last run
            numerator <<= precision_bits - emitted;
            if fill_ones {
                numerator += (BigUint::from(1u8) << (precision_bits - emitted)) - 1u8;
            }
            emitted = precision_bits;
            break;
        };
        let take = run.min(precision_bits - emitted);
        numerator <<= take;
        if ones {
            numerator += (BigUint::from(1u8) << take) - 1u8;
        }
        emitted += take;
        if take < run {
            break;
        }
        ones = !ones;
        i += 1;
    }
    if emitted < precision_bits {
        numerator <<= precision_bits - emitted;
    }
    Ok(Dyadic { numerator, bits: precision_bits })
}

/// Result of verifying the conjugacy h(x+1) = (h(x)+1)/2 and
/// h(x/(x+1)) = h(x)/2 at fixed precision.
#[derive(Debug, Clone)]
pub struct ConjugacyReport {
    pub alpha_error_scaled: BigUint,
    pub beta_error_scaled: BigUint,
    pub pass: bool,
}

/// Verify both conjugacy identities to within 2^(1-bits), using exact
/// continued-fraction transforms and integer arithmetic at scale 2^(bits+1).
pub fn h_conjugacy_check(cf: &ContinuedFraction, precision_bits: u32) -> Result<ConjugacyReport> {
    let h = minkowski_h(cf, precision_bits)?;
    let h_alpha = minkowski_h(&cf.plus_one(), precision_bits)?;
    let h_beta = minkowski_h(&cf.over_x_plus_one(), precision_bits)?;

    let one: BigUint = BigUint::from(1u8) << precision_bits;
    // |2·h(x+1) - (h(x) + 1)| and |2·h(x/(x+1)) - h(x)| at scale 2^(bits+1);
    // passing means <= 4, i.e. 2^(1-bits) at unit scale.
    let lhs_a: BigUint = &h_alpha.numerator << 1;
    let rhs_a: BigUint = &h.numerator + &one;
    let err_a = if lhs_a >= rhs_a { &lhs_a - &rhs_a } else { &rhs_a - &lhs_a };

    let lhs_b: BigUint = &h_beta.numerator << 1;
    let rhs_b = h.numerator.clone();
    let err_b = if lhs_b >= rhs_b { &lhs_b - &rhs_b } else { &rhs_b - &lhs_b };

    let limit = BigUint::from(4u8);
    let pass = err_a <= limit && err_b <= limit;
    Ok(ConjugacyReport {
        alpha_error_scaled: err_a,
        beta_error_scaled: err_b,
        pass,
    })
}

/// Generator letters of the word machinery: α(z) = z+1 and β(z) = z/(z+1),
/// with the binary encoding 1 ↦ α, 0 ↦ β.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn alpha_count(&self) -> usize {
        self.0.iter().filter(|l| **l == Letter::Alpha).count()
    }

    pub fn rotated(&self, k: usize) -> Word {
        let n = self.0.len();
        Word((0..n).map(|i| self.0[(i + k) % n]).collect())
    }

    /// Digits with the 1 ↦ α, 0 ↦ β encoding, e.g. "001" for ββα.
    pub fn digits(&self) -> String {
        self.0
            .iter()
            .map(|l| match l {
                Letter::Alpha => '1',
                Letter::Beta => '0',
            })
            .collect()
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::Alpha => "α",
                Letter::Beta => "β",
            })?;
        }
        Ok(())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The finite Sturmian word W_{p/q} of rotation number p/q (coprime,
/// 0 < p < q): letters s_i = ⌊(i+1)p/q⌋ - ⌊ip/q⌋ with 1 ↦ α, 0 ↦ β,
/// returned as the lexicographically least rotation (β < α).
pub fn sturmian_word(p: u64, q: u64) -> Result<Word> {
    if p == 0 || p >= q {
        return Err(Error::BadFraction { p, q, reason: "need 0 < p < q".into() });
    }
    if gcd(p, q) != 1 {
        return Err(Error::BadFraction { p, q, reason: "p/q must be in lowest terms".into() });
    }
    let letters: Vec<Letter> = (0..q)
        .map(|i| {
            let s = (i + 1) * p / q - i * p / q;
            if s == 1 {
                Letter::Alpha
            } else {
                Letter::Beta
            }
        })
        .collect();
    let word = Word(letters);
    // Canonical cyclic representative: lexicographically least rotation with
    // β ordered before α.
    let rank = |l: Letter| match l {
        Letter::Beta => 0u8,
        Letter::Alpha => 1u8,
    };
    let n = word.len();
    let best = (0..n)
        .min_by_key(|&k| (0..n).map(|i| rank(word.0[(i + k) % n])).collect::<Vec<_>>())
        .unwrap_or(0);
    Ok(word.rotated(best))
}

/// A word together with its exact integer Möbius matrix, the product of
/// M_α = [[1,1],[0,1]] and M_β = [[1,0],[1,1]] in letter order.
#[derive(Debug, Clone)]
pub struct WordMatrix {
    pub word: Word,
    pub m: [[BigInt; 2]; 2],
}

impl WordMatrix {
    pub fn trace(&self) -> BigInt {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn det(&self) -> BigInt {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    /// Dominant eigenvalue (tr + sqrt(tr² - 4))/2 as a float, when tr > 2.
    pub fn dominant_eigenvalue(&self) -> Option<f64> {
        let tr = bigint_to_f64(&self.trace());
        if tr > 2.0 {
            Some((tr + (tr * tr - 4.0).sqrt()) / 2.0)
        } else {
            None
        }
    }

    /// Real fixed points of the Möbius action: roots of c·x² + (d-a)·x - b.
    pub fn axis_endpoints(&self) -> Option<(f64, f64)> {
        let a = bigint_to_f64(&self.m[0][0]);
        let b = bigint_to_f64(&self.m[0][1]);
        let c = bigint_to_f64(&self.m[1][0]);
        let d = bigint_to_f64(&self.m[1][1]);
        if c == 0.0 {
            return None;
        }
        let disc = (d - a) * (d - a) + 4.0 * c * b;
        if disc <= 0.0 {
            return None;
        }
        let s = disc.sqrt();
        Some(((a - d - s) / (2.0 * c), (a - d + s) / (2.0 * c)))
    }
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_bigint::Sign;
    let (sign, digits) = x.to_u64_digits();
    let mut v = 0.0f64;
    for d in digits.iter().rev() {
        v = v * 2f64.powi(64) + *d as f64;
    }
    if sign == Sign::Minus {
        -v
    } else {
        v
    }
}

pub fn word_matrix(word: &Word) -> WordMatrix {
    let mut m = [
        [BigInt::from(1), BigInt::from(0)],
        [BigInt::from(0), BigInt::from(1)],
    ];
    for l in &word.0 {
        let (a, b, c, d) = match l {
            Letter::Alpha => (1, 1, 0, 1),
            Letter::Beta => (1, 0, 1, 1),
        };
        let next = [
            [
                &m[0][0] * a + &m[0][1] * c,
                &m[0][0] * b + &m[0][1] * d,
            ],
            [
                &m[1][0] * a + &m[1][1] * c,
                &m[1][0] * b + &m[1][1] * d,
            ],
        ];
        m = next;
    }
    WordMatrix { word: word.clone(), m }
}

/// A disk in the τ-plane (Yoccoz disks) or z-plane (CIFS disks).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Cx,
    pub radius: f64,
}

impl Disk {
    pub fn contains(&self, z: Cx) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

/// Which inequality generates the disk family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiskVariant {
    /// The mating inequality with its Sturmian denominator.
    Mating,
    /// The classical polynomial inequality with slope mq/(2 log d).
    Classical { d: u32, m: u32 },
}

/// The closed disk carved out by Re τ ≥ M·|τ - 2πiθ|² with θ = p/q:
/// center 2πiθ + 1/(2M), radius 1/(2M), tangent to the imaginary axis at
/// 2πiθ.
pub fn yoccoz_disk(p: u64, q: u64, variant: DiskVariant) -> Result<Disk> {
    if p == 0 || p >= q || gcd(p, q) != 1 {
        return Err(Error::BadFraction { p, q, reason: "need coprime 0 < p < q".into() });
    }
    let theta = p as f64 / q as f64;
    let slope = match variant {
        DiskVariant::Mating => {
            if 2 * p <= q {
                let ceil = q.div_ceil(p);
                (q * q) as f64 / (4.0 * p as f64 * ((ceil + 1) as f64).ln())
            } else {
                let ceil = q.div_ceil(q - p);
                (q * q) as f64 / (4.0 * (q - p) as f64 * ((ceil + 1) as f64).ln())
            }
        }
        DiskVariant::Classical { d, m } => {
            if d < 2 || m < 1 {
                return Err(Error::InvalidInput("classical variant needs d >= 2, m >= 1".into()));
            }
            m as f64 * q as f64 / (2.0 * (d as f64).ln())
        }
    };
    let radius = 1.0 / (2.0 * slope);
    Ok(Disk {
        center: Cx::new(radius, TAU * theta),
        radius,
    })
}

/// All coprime p/q in (0, 1/2] with q <= q_max, ordered by (q, p).
pub fn low_fractions(q_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for q in 2..=q_max {
        for p in 1..=(q / 2) {
            if gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// CSV of the disk family for all coprime p/q in (0, 1/2] with q <= q_max
/// plus the given extras, in deterministic order. Header
/// `p,q,center_re,center_im,radius`, 17 significant digits, LF endings.
pub fn emit_disk_family(q_max: u64, extra: &[(u64, u64)], variant: DiskVariant) -> Result<String> {
    if q_max < 2 {
        return Err(Error::InvalidInput("q_max must be >= 2".into()));
    }
    let mut rows = low_fractions(q_max);
    rows.extend_from_slice(extra);
    let mut s = String::from("p,q,center_re,center_im,radius\n");
    for (p, q) in rows {
        let disk = yoccoz_disk(p, q, variant)?;
        s.push_str(&format!(
            "{p},{q},{:.16e},{:.16e},{:.16e}\n",
            disk.center.re, disk.center.im, disk.radius
        ));
    }
    Ok(s)
}
