//! Deterministic, splittable random streams and the primitive distributions
//! every sampler consumes.
//!
//! The backbone is ChaCha12, a counter-based generator with 2^64 independent
//! streams selected by a stream id. Batch jobs give each sample index its own
//! stream, which makes embarrassingly parallel sampling reproducible: the
//! output of sample `i` depends only on `(seed, i)`, never on scheduling.
//!
//! Draw accounting is kept trivial on purpose: `uniform` consumes exactly one
//! generator word, and `gaussian` is inverse-CDF (exactly one uniform per
//! draw, no rejection, no cached spare).

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::special_fn::{erf, gauss_inv_cdf};
use crate::{Error, Result};

/// Admissible window for the exit-time proposal threshold `t_e`:
/// the lower end keeps the spectral terms decreasing, the upper end keeps the
/// image terms decreasing, so the sandwich bounds are valid on both branches.
pub const PROPOSAL_T_MIN: f64 = 4.0 / (9.0 * std::f64::consts::PI * std::f64::consts::PI);
/// Upper end of the proposal-threshold window.
pub const PROPOSAL_T_MAX: f64 = 1.0;

/// A deterministic random stream: `(seed, stream_id)` fully determines the
/// sequence, and distinct stream ids yield statistically independent streams.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    gen: ChaCha12Rng,
}

impl RngStream {
    /// Creates the stream identified by `(seed, stream_id)`.
    pub fn new(seed: u64, stream_id: u64) -> Self {
        // Expand the 64-bit seed into a 256-bit key with splitmix64 so that
        // nearby seeds produce unrelated keys.
        let mut key = [0u8; 32];
        let mut state = seed;
        for chunk in key.chunks_exact_mut(8) {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            chunk.copy_from_slice(&z.to_le_bytes());
        }
        let mut gen = ChaCha12Rng::from_seed(key);
        gen.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            gen,
        }
    }

    /// The seed this stream was built from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The stream id this stream was built from.
    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A fresh stream with the same seed and a different stream id — the only
    /// sanctioned way to share randomness across workers.
    pub fn substream(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }

    /// Uniform draw on the half-open interval [0, 1): 53 random bits, so the
    /// value 1.0 is unreachable.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.gen.next_u64() >> 11) as f64 * SCALE
    }

    /// Uniform draw on the open interval (0, 1); used wherever a logarithm or
    /// quantile of the draw is taken, so 0.0 is unreachable too.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.gen.next_u64() >> 11) as f64 + 0.5) * SCALE
    }

    /// Standard normal draw via the Gaussian quantile of one open uniform.
    #[inline]
    pub fn gaussian(&mut self) -> f64 {
        gauss_inv_cdf(self.uniform_open())
    }

    /// Exponential draw with the given rate (mean `1/rate`). `rate` must be
    /// strictly positive — a zero rate is a programming error here; samplers
    /// that want "clock never rings" handle that case themselves.
    #[inline]
    pub fn exponential(&mut self, rate: f64) -> f64 {
        debug_assert!(rate > 0.0, "exponential rate must be > 0");
        -self.uniform_open().ln() / rate
    }

    /// Draws one exit-time proposal with threshold `t_e` (see
    /// [`ProposalDraw`]). Rejects `t_e` outside the admissible window.
    pub fn sample_hhat(&mut self, t_e: f64) -> Result<ProposalDraw> {
        check_proposal_threshold(t_e)?;
        let g = self.gaussian();
        let inv_g2 = 1.0 / (g * g); // g == 0 gives +inf, which lands in the large branch
        if inv_g2 <= t_e {
            Ok(ProposalDraw {
                value: inv_g2,
                branch: ProposalBranch::SmallTime,
            })
        } else {
            let u = self.uniform_open();
            Ok(ProposalDraw {
                value: t_e - 8.0 / (std::f64::consts::PI * std::f64::consts::PI) * u.ln(),
                branch: ProposalBranch::LargeTime,
            })
        }
    }
}

/// Validates the proposal threshold window.
pub(crate) fn check_proposal_threshold(t_e: f64) -> Result<()> {
    if !(PROPOSAL_T_MIN..=PROPOSAL_T_MAX).contains(&t_e) {
        return Err(Error::InvalidParam {
            name: "t_e",
            value: t_e,
            constraint: "4/(9*pi^2) <= t_e <= 1",
        });
    }
    Ok(())
}

/// Which branch of the exit-time proposal produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProposalBranch {
    /// Value came from `1/G^2` with `G` standard normal (value <= t_e).
    SmallTime,
    /// Value came from the shifted exponential tail (value > t_e).
    LargeTime,
}

/// One proposal for an exit time: a positive value and the branch that
/// produced it. The invariant `branch == SmallTime  <=>  value <= t_e` holds
/// by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProposalDraw {
    pub value: f64,
    pub branch: ProposalBranch,
}

/// Normalization constant of the proposal's large-time branch:
/// `kappa_e^{-1} = (pi/2) erf(sqrt(1/(2 t_e))) e^(pi^2 t_e / 8)`.
pub fn proposal_kappa_e(t_e: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let inv = pi / 2.0 * erf((1.0 / (2.0 * t_e)).sqrt()) * (pi * pi * t_e / 8.0).exp();
    1.0 / inv
}

/// Closed-form CDF of the proposal distribution (used by the distributional
/// self-tests): `P(Y <= y) = erfc(1/sqrt(2y))` below the threshold, then the
/// shifted-exponential tail above it.
pub fn proposal_cdf(t_e: f64, y: f64) -> f64 {
    let pi = std::f64::consts::PI;
    if y <= 0.0 {
        0.0
    } else if y <= t_e {
        crate::special_fn::erfc((1.0 / (2.0 * y)).sqrt())
    } else {
        let p_small = crate::special_fn::erfc((1.0 / (2.0 * t_e)).sqrt());
        let p_large = erf((1.0 / (2.0 * t_e)).sqrt());
        p_small + p_large * (1.0 - (-pi * pi * (y - t_e) / 8.0).exp())
    }
}

/// Runs `f` once per sample index with a dedicated stream per index,
/// in parallel, returning results in index order.
///
/// `threads = Some(k)` caps the worker pool at `k`; `None` (or `Some(0)`)
/// uses the process-default pool. Results are deterministic either way
/// because stream `i` depends only on `(seed, i)`.
pub fn batch_sample<T, F>(seed: u64, n: usize, threads: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut RngStream) -> T + Sync,
{
    let run = || {
        (0..n as u64)
            .into_par_iter()
            .map(|i| {
                let mut stream = RngStream::new(seed, i);
                f(i, &mut stream)
            })
            .collect()
    };
    match threads {
        Some(k) if k > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .expect("worker pool construction cannot fail with a positive thread count")
            .install(run),
        _ => run(),
    }
}
