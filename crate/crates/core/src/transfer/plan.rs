use crate::error::{Error, Result};
use crate::metric::{Distance, ScaleSequence};

/// `s_i = lambda * r_{(i+1)(n+1)}` for `i < count`.
pub fn plan_scales(scales: &ScaleSequence, lambda: Distance, n: usize, count: usize) -> Result<Vec<Distance>> {
    if lambda.is_zero() {
        return Err(Error::precondition("lambda > 0", "the orbit map is constant"));
    }
    (0..count)
        .map(|i| {
            let r = scales.get((i + 1) * (n + 1))?;
            lambda
                .checked_mul(&r)
                .ok_or_else(|| Error::InvalidScales(format!("lambda * r_{} overflows", (i + 1) * (n + 1))))
        })
        .collect()
}

/// `k -> (k div (n+1), k mod (n+1))`.
pub fn index_pair(k: usize, n: usize) -> (usize, usize) {
    (k / (n + 1), k % (n + 1))
}

/// `(i, j) -> i(n+1) + j`, defined for `j <= n`.
pub fn pair_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if j > n {
        return Err(Error::IndexDomain { i, j, n });
    }
    Ok(i * (n + 1) + j)
}

/// The parameters of one transfer: scales, the dimension bound `n` of the
/// quasi-stabilizer witnesses, the last space family index `m`, the
/// Lipschitz constant, the space witness bound `R`, the group window radius
/// `N` and the core margin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferPlan {
    pub scales: ScaleSequence,
    pub n: usize,
    pub m: usize,
    pub lambda: Distance,
    pub bound: Distance,
    pub radius: u32,
    pub margin: u32,
}

impl TransferPlan {
    /// `m` is read off as `space_families - 1`. The default margin is
    /// `ceil(N / 2)`: an anchor of minimal word length in the preimage of
    /// the block containing `pi(h)` has length at most `|h|`, so
    /// `g_F^-1 h` stays in the window whenever `2|h| <= N`.
    pub fn new(
        scales: ScaleSequence,
        n: usize,
        lambda: Distance,
        space_families: usize,
        bound: Distance,
        radius: u32,
        margin: Option<u32>,
    ) -> Result<Self> {
        if space_families == 0 {
            return Err(Error::precondition("space witness has a family", "no families supplied"));
        }
        let margin = margin.unwrap_or(radius.div_ceil(2));
        if margin > radius {
            return Err(Error::Validation(format!("core margin {margin} exceeds the window radius {radius}")));
        }
        let plan = TransferPlan {
            scales,
            n,
            m: space_families - 1,
            lambda,
            bound,
            radius,
            margin,
        };
        plan.quasi_stabilizer_scale()?;
        plan_scales(&plan.scales, lambda, n, space_families)?;
        Ok(plan)
    }

    /// `(m+1)(n+1)`.
    pub fn family_count(&self) -> usize {
        (self.m + 1) * (self.n + 1)
    }

    /// `r_k`.
    pub fn scale(&self, k: usize) -> Result<Distance> {
        self.scales.get(k)
    }

    /// `lambda * r_{(i+1)(n+1)}`, required of space family `i`.
    pub fn space_scale(&self, i: usize) -> Result<Distance> {
        Ok(plan_scales(&self.scales, self.lambda, self.n, i + 1)?[i])
    }

    /// `r_{(i+1)(n+1)}`, the pullback separation of space family `i`.
    pub fn pullback_scale(&self, i: usize) -> Result<Distance> {
        self.scales.get((i + 1) * (self.n + 1))
    }

    /// `r_{(m+1)(n+1)}`, required of every quasi-stabilizer family.
    pub fn quasi_stabilizer_scale(&self) -> Result<Distance> {
        self.scales.get(self.family_count())
    }

    pub fn core_radius(&self) -> u32 {
        self.radius - self.margin
    }
}
