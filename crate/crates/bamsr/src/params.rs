//! Parameter derivation for the bandwidth-adaptive MSR code.
//!
//! The whole design hangs off two integers: the block size `mu` and the
//! flexibility degree `delta`. Everything else is forced:
//!
//! * `z = lcm(1..=delta)`, per-node capacity `alpha = mu * z`
//! * reconstruction threshold `k = mu + 1`, stripe size `F = k * alpha`
//! * admissible helper counts `D = { (i+1) * mu : i = 1..=delta }`
//! * per-helper repair bandwidth `beta(d) = alpha / (d - k + 1)`, an integer
//!   for every `d` in `D`, with total `gamma(d) = d * beta(d)`
//!
//! So `alpha = (d - k + 1) * beta(d)` holds simultaneously for every
//! admissible `d`: repairs are storage-optimal at each helper count.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Symbol};

/// All derived code parameters plus the evaluation points. Immutable after
/// construction and freely shareable.
#[derive(Debug)]
pub struct CodeParams {
    mu: usize,
    delta: usize,
    z: usize,
    alpha: usize,
    k: usize,
    file_size: usize,
    n: usize,
    helper_counts: Vec<usize>,
    points: Vec<Symbol>,
    field: Field,
}

impl CodeParams {
    /// Derive every parameter from the design pair `(mu, delta)`, the node
    /// count `n`, and a field, selecting evaluation points deterministically.
    pub fn derive(mu: usize, delta: usize, n: usize, spec: &FieldSpec) -> Result<Self> {
        let field = Field::new(spec)?;
        let points = select_points(&field, n, mu)?;
        Self::build(mu, delta, field, points)
    }

    /// Like [`CodeParams::derive`] but with caller-chosen evaluation points
    /// (`n` is their count). Points must be distinct, nonzero, and have
    /// pairwise distinct `mu`-th powers.
    pub fn with_points(
        mu: usize,
        delta: usize,
        spec: &FieldSpec,
        points: &[Symbol],
    ) -> Result<Self> {
        let field = Field::new(spec)?;
        validate_points(&field, mu, points)?;
        Self::build(mu, delta, field, points.to_vec())
    }

    fn build(mu: usize, delta: usize, field: Field, points: Vec<Symbol>) -> Result<Self> {
        if mu < 1 {
            return Err(Error::Params("mu must be at least 1".into()));
        }
        if delta < 1 {
            return Err(Error::Params("delta must be at least 1".into()));
        }
        let n = points.len();
        let z = lcm_upto(delta)?;
        let alpha = mu
            .checked_mul(z)
            .ok_or_else(|| Error::Params("alpha overflows".into()))?;
        let k = mu + 1;
        let file_size = k
            .checked_mul(alpha)
            .ok_or_else(|| Error::Params("stripe size overflows".into()))?;
        let helper_counts: Vec<usize> = (1..=delta).map(|i| (i + 1) * mu).collect();
        let d_max = *helper_counts.last().unwrap();
        if n < d_max + 1 {
            return Err(Error::Params(format!(
                "n = {n} is too small: need n >= d_max + 1 = {}",
                d_max + 1
            )));
        }
        for &d in &helper_counts {
            debug_assert_eq!(alpha % (d - mu), 0, "beta({d}) must be integral");
        }
        Ok(CodeParams {
            mu,
            delta,
            z,
            alpha,
            k,
            file_size,
            n,
            helper_counts,
            points,
            field,
        })
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// z = lcm(1..=delta): the number of block-columns of the data matrix.
    pub fn z(&self) -> usize {
        self.z
    }

    /// Per-node storage capacity in symbols.
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// Reconstruction threshold: any k shares recover the stripe.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Source symbols per stripe, F = k * alpha.
    pub fn file_size(&self) -> usize {
        self.file_size
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The designed helper-count set D, sorted ascending.
    pub fn helper_counts(&self) -> &[usize] {
        &self.helper_counts
    }

    pub fn is_valid_d(&self, d: usize) -> bool {
        d >= 2 * self.mu && d.is_multiple_of(self.mu) && d <= (self.delta + 1) * self.mu
    }

    /// Per-helper repair bandwidth for an admissible helper count.
    pub fn beta(&self, d: usize) -> Result<usize> {
        if !self.is_valid_d(d) {
            return Err(Error::Params(format!(
                "d = {d} is not in the designed helper set {:?}",
                self.helper_counts
            )));
        }
        Ok(self.alpha / (d - self.mu))
    }

    /// Total repair bandwidth gamma(d) = d * beta(d).
    pub fn gamma(&self, d: usize) -> Result<usize> {
        Ok(d * self.beta(d)?)
    }

    /// Evaluation points e_1..e_n.
    pub fn points(&self) -> &[Symbol] {
        &self.points
    }

    /// Evaluation point of node j (1-based).
    pub fn point(&self, j: usize) -> Result<Symbol> {
        if j < 1 || j > self.n {
            return Err(Error::Input(format!(
                "node index {j} out of range 1..={}",
                self.n
            )));
        }
        Ok(self.points[j - 1])
    }

    /// Width of a coefficient row: (z + 1) * mu.
    pub fn psi_width(&self) -> usize {
        (self.z + 1) * self.mu
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Exponents a_j with e_j = g^{a_j} for the deterministic selection.
    pub fn default_point_exponents(n: usize) -> Vec<u64> {
        (0..n as u64).collect()
    }
}

/// The derived size quadruple (z, alpha, k, F) for a design pair, without
/// building a full code. Used by the file readers to validate payloads.
pub fn derived_sizes(mu: usize, delta: usize) -> Result<(usize, usize, usize, usize)> {
    if mu < 1 || delta < 1 {
        return Err(Error::Params("mu and delta must be at least 1".into()));
    }
    let z = lcm_upto(delta)?;
    let alpha = mu
        .checked_mul(z)
        .ok_or_else(|| Error::Params("alpha overflows".into()))?;
    let k = mu + 1;
    let file_size = k
        .checked_mul(alpha)
        .ok_or_else(|| Error::Params("stripe size overflows".into()))?;
    Ok((z, alpha, k, file_size))
}

/// Deterministic evaluation-point selection: e_j = g^(j-1) for the field's
/// fixed generator g. Feasible iff `n <= (q - 1) / gcd(mu, q - 1)`, which
/// makes the points distinct, nonzero, and with pairwise distinct mu-th
/// powers (as reconstruction requires).
pub fn select_points(field: &Field, n: usize, mu: usize) -> Result<Vec<Symbol>> {
    if n == 0 {
        return Err(Error::Params("need at least one node".into()));
    }
    let q = field.order() as u64;
    let bound = (q - 1) / gcd(mu as u64, q - 1);
    if n as u64 > bound {
        return Err(Error::Params(format!(
            "cannot select {n} points over a field of order {q} with mu = {mu}: \
             at most (q-1)/gcd(mu, q-1) = {bound} points have distinct mu-th powers"
        )));
    }
    let g = field.generator();
    let mut points = Vec::with_capacity(n);
    let mut cur: Symbol = 1;
    for _ in 0..n {
        points.push(cur);
        cur = field.mul(cur, g);
    }
    debug_assert!(validate_points(field, mu, &points).is_ok());
    Ok(points)
}

/// Check that a point set is usable: in-field, nonzero, pairwise distinct,
/// and with pairwise distinct mu-th powers.
pub fn validate_points(field: &Field, mu: usize, points: &[Symbol]) -> Result<()> {
    let mut powers = Vec::with_capacity(points.len());
    for (i, &p) in points.iter().enumerate() {
        if !field.contains(p) {
            return Err(Error::Input(format!("point {p} outside the field")));
        }
        if p == 0 {
            return Err(Error::Input(format!("point {} is zero", i + 1)));
        }
        if points[..i].contains(&p) {
            return Err(Error::Input(format!("repeated point {p}")));
        }
        let pw = field.pow(p, mu as u64);
        if powers.contains(&pw) {
            return Err(Error::Input(format!(
                "points {p} and an earlier one share the same mu-th power {pw}"
            )));
        }
        powers.push(pw);
    }
    Ok(())
}

/// MSR per-helper bandwidth: beta = F / (k (d - k + 1)).
pub fn msr_beta(file_size: usize, k: usize, d: usize) -> Result<usize> {
    if d < k {
        return Err(Error::Params(format!("d = {d} must be at least k = {k}")));
    }
    let denom = k * (d - k + 1);
    if !file_size.is_multiple_of(denom) {
        return Err(Error::Params(format!(
            "beta = {file_size}/{denom} is not an integer"
        )));
    }
    Ok(file_size / denom)
}

/// Per-node capacity a prior-art bandwidth-adaptive MSR construction needs
/// for the same helper set: `lcm(d_1-k+1, ..., d_delta-k+1)^n`. Exceeds
/// 64-bit range already at desk scale, hence the big integer.
pub fn prior_art_alpha(helper_counts: &[usize], k: usize, n: usize) -> BigUint {
    assert!(!helper_counts.is_empty(), "helper set must be nonempty");
    assert!(
        helper_counts.iter().all(|&d| d + 1 > k),
        "every d must exceed k - 1"
    );
    let l = helper_counts
        .iter()
        .map(|&d| (d - k + 1) as u64)
        .fold(1u64, lcm);
    BigUint::from(l).pow(n as u32)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn lcm_upto(delta: usize) -> Result<usize> {
    let mut z: u64 = 1;
    for i in 2..=delta as u64 {
        z = lcm(z, i);
        if z > u32::MAX as u64 {
            return Err(Error::Params(format!(
                "lcm(1..={delta}) is impractically large"
            )));
        }
    }
    Ok(z as usize)
}
