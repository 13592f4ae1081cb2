use std::collections::HashMap;

use super::counts::{GramMap, NGramCounts};
use super::model::{Entry, NGramModel, Smoothing, BOS_LOGPROB};
use super::vocab::BOS_ID;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KneserNeyOptions {
    /// Use Witten-Bell at orders whose counts-of-counts leave the discount
    /// undefined (`n1 == 0` or `n2 == 0`) instead of failing.
    pub fallback_to_witten_bell: bool,
}

impl Default for KneserNeyOptions {
    fn default() -> Self {
        KneserNeyOptions {
            fallback_to_witten_bell: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum OrderMethod {
    /// Absolute discounting with a single discount.
    Discount(f64),
    WittenBell,
}

/// Interpolated Kneser-Ney with one discount `D = n1 / (n1 + 2 n2)` per order.
///
/// The top order uses raw counts. Lower orders use continuation counts
/// (number of distinct left extensions), except n-grams starting with `<s>`,
/// which have no left context and keep their raw counts.
pub fn estimate_kneser_ney(counts: &NGramCounts) -> Result<NGramModel> {
    estimate_kneser_ney_with(counts, &KneserNeyOptions::default())
}

pub fn estimate_kneser_ney_with(
    counts: &NGramCounts,
    options: &KneserNeyOptions,
) -> Result<NGramModel> {
    estimate(counts, Smoothing::KneserNeyInterpolated, options)
}

/// Recursive Witten-Bell interpolation:
/// `P(w|h) = lambda_h P_ML(w|h) + (1 - lambda_h) P(w|h')` with
/// `lambda_h = c(h) / (c(h) + T(h))`, bottoming out in a uniform distribution.
pub fn estimate_witten_bell(counts: &NGramCounts) -> Result<NGramModel> {
    estimate(counts, Smoothing::WittenBell, &KneserNeyOptions::default())
}

fn effective_counts(counts: &NGramCounts, k: usize, kneser_ney: bool) -> GramMap<u64> {
    let raw = &counts.counts[k - 1];
    raw.iter()
        .filter(|(g, _)| !(k == 1 && g[0] == BOS_ID))
        .map(|(g, &c)| {
            let c = if kneser_ney && k < counts.order && g[0] != BOS_ID {
                counts.continuation[k - 1][g]
            } else {
                c
            };
            (g.clone(), c)
        })
        .collect()
}

fn estimate(counts: &NGramCounts, smoothing: Smoothing, options: &KneserNeyOptions) -> Result<NGramModel> {
    if counts.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot estimate a language model from empty counts".into(),
        ));
    }
    let order = counts.order;
    let kneser_ney = smoothing == Smoothing::KneserNeyInterpolated;
    let mut model = NGramModel {
        order,
        smoothing,
        vocab: counts.vocab.clone(),
        tables: Vec::with_capacity(order),
    };
    let vocab_size = model.vocab.predictable().count() as f64;

    for k in 1..=order {
        let effective = effective_counts(counts, k, kneser_ney);

        let method = if kneser_ney {
            let n1 = effective.values().filter(|&&c| c == 1).count();
            let n2 = effective.values().filter(|&&c| c == 2).count();
            if n1 > 0 && n2 > 0 {
                OrderMethod::Discount(n1 as f64 / (n1 as f64 + 2.0 * n2 as f64))
            } else if effective.is_empty() || options.fallback_to_witten_bell {
                if !effective.is_empty() {
                    log::warn!(
                        "order {k}: counts-of-counts n1={n1}, n2={n2} leave the Kneser-Ney discount undefined; using Witten-Bell"
                    );
                }
                OrderMethod::WittenBell
            } else {
                return Err(Error::InvalidArgument(format!(
                    "order {k} lacks counts-of-counts for Kneser-Ney (n1={n1}, n2={n2})"
                )));
            }
        } else {
            OrderMethod::WittenBell
        };

        // history -> (total count, distinct continuations)
        let mut histories: HashMap<&[u32], (u64, u64)> = HashMap::new();
        for (g, &c) in &effective {
            let slot = histories.entry(&g[..k - 1]).or_insert((0, 0));
            slot.0 += c;
            slot.1 += 1;
        }
        let split = |total: u64, types: u64| -> (f64, f64) {
            // returns (denominator for the discounted part, interpolation weight)
            let (a, t) = (total as f64, types as f64);
            match method {
                OrderMethod::Discount(d) => (a, d * t / a),
                OrderMethod::WittenBell => (a + t, t / (a + t)),
            }
        };

        let mut table: HashMap<Vec<u32>, Entry> = HashMap::with_capacity(effective.len() + 1);
        for (g, &c) in &effective {
            let (total, types) = histories[&g[..k - 1]];
            let (denominator, gamma) = split(total, types);
            let numerator = match method {
                OrderMethod::Discount(d) => c as f64 - d,
                OrderMethod::WittenBell => c as f64,
            };
            let word = g[k - 1];
            let lower = if k == 1 {
                1.0 / vocab_size
            } else {
                10f64.powf(model.logprob_ids(&g[1..k - 1], word))
            };
            let p = numerator / denominator + gamma * lower;
            table.insert(
                g.clone(),
                Entry {
                    logprob: p.log10(),
                    logbow: 0.0,
                },
            );
        }

        if k == 1 {
            let (total, types) = histories.get(&[][..]).copied().unwrap_or((0, 0));
            let gamma = if total == 0 { 1.0 } else { split(total, types).1 };
            for id in model.vocab.predictable() {
                table.entry(vec![id]).or_insert(Entry {
                    logprob: (gamma / vocab_size).log10(),
                    logbow: 0.0,
                });
            }
            table.insert(
                vec![BOS_ID],
                Entry {
                    logprob: BOS_LOGPROB,
                    logbow: 0.0,
                },
            );
        } else {
            let lower = &mut model.tables[k - 2];
            for (h, &(total, types)) in &histories {
                let gamma = split(total, types).1;
                match lower.get_mut(*h) {
                    Some(e) => e.logbow = gamma.log10(),
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "history {h:?} at order {} has no entry",
                            k - 1
                        )))
                    }
                }
            }
        }
        model.tables.push(table);
    }
    Ok(model)
}
