use super::em::{self, Prior};
use super::lexical::LexicalTable;
use crate::corpus::ParallelCorpus;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastAlignOptions {
    pub iterations: usize,
    pub initial_tension: f64,
    pub p_null: f64,
    pub optimize_tension: bool,
    /// Gradient steps on the tension per EM iteration.
    pub tension_steps: usize,
}

impl Default for FastAlignOptions {
    fn default() -> Self {
        FastAlignOptions {
            iterations: 5,
            initial_tension: 4.0,
            p_null: 0.08,
            optimize_tension: true,
            tension_steps: 8,
        }
    }
}

const MIN_TENSION: f64 = 0.1;
const MAX_TENSION: f64 = 14.0;
const TENSION_RATE: f64 = 20.0;

/// Lexical table plus diagonal tension and null probability.
#[derive(Debug, Clone, PartialEq)]
pub struct FastAlignParams {
    pub lex: LexicalTable,
    pub tension: f64,
    pub p_null: f64,
}

impl FastAlignParams {
    pub fn new(lex: LexicalTable, tension: f64, p_null: f64) -> Result<Self> {
        if !(tension > 0.0 && tension.is_finite()) {
            return Err(Error::InvalidArgument(format!("tension must be positive, got {tension}")));
        }
        if !(0.0..1.0).contains(&p_null) {
            return Err(Error::InvalidArgument(format!("p_null must be in [0,1), got {p_null}")));
        }
        Ok(FastAlignParams { lex, tension, p_null })
    }

    /// Prior over conditioning positions for generated position `j`
    /// (0-based, sentence length `n`, conditioning length `m`): the link
    /// probabilities and the null probability.
    pub fn alignment_prior(&self, j: usize, n: usize, m: usize) -> (Vec<f64>, f64) {
        let mut out = Vec::with_capacity(m);
        let null = if m == 0 {
            1.0
        } else {
            em::diagonal_prior(j, n, m, self.tension, self.p_null, &mut out)
        };
        (out, null)
    }
}

fn validate(opts: &FastAlignOptions) -> Result<()> {
    if opts.iterations == 0 {
        return Err(Error::InvalidArgument("iterations must be at least 1".into()));
    }
    if !(opts.initial_tension > 0.0) {
        return Err(Error::InvalidArgument("tension must be positive".into()));
    }
    if !(0.0..1.0).contains(&opts.p_null) {
        return Err(Error::InvalidArgument("p_null must be in [0,1)".into()));
    }
    Ok(())
}

/// EM for the diagonally reparametrized Model 2, generating source words
/// from target words.
pub fn train_fast_align(corpus: &ParallelCorpus, opts: &FastAlignOptions) -> Result<FastAlignParams> {
    validate(opts)?;
    let enc = em::encode(corpus)?;
    let mut table = em::initial_table(&enc);
    let mut tension = opts.initial_tension;
    for _ in 0..opts.iterations {
        let prior = Prior::Diagonal {
            tension,
            p_null: opts.p_null,
        };
        let ex = em::expectations(&enc, &table, prior);
        table = em::maximize(&enc, &ex);
        if opts.optimize_tension && ex.tokens > 0 {
            for _ in 0..opts.tension_steps {
                let model = expected_feature(&ex.link_mass, tension);
                tension += TENSION_RATE * (model - ex.empirical_feature) / ex.tokens as f64;
                tension = tension.clamp(MIN_TENSION, MAX_TENSION);
            }
        }
    }
    FastAlignParams::new(table, tension, opts.p_null)
}

/// Σ over positions of link mass × prior expectation of |i/m − j/n|.
fn expected_feature(link_mass: &std::collections::BTreeMap<(usize, usize), Vec<f64>>, tension: f64) -> f64 {
    let mut total = 0.0;
    for (&(m, n), mass) in link_mass {
        for (j, &c) in mass.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let (mut z, mut s) = (0.0, 0.0);
            for i in 0..m {
                let h = em::feature(i, j, m, n);
                let w = (-tension * h).exp();
                z += w;
                s += w * h;
            }
            total += c * s / z;
        }
    }
    total
}
