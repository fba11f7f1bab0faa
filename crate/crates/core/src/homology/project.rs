//! Chain maps along an operation log.
//!
//! Chains here are keyed by cell id (the index of the cell in the initial
//! map). `g` lifts a chain of the simplified map back to the initial one;
//! `f` pushes a chain of the initial map forward. Along a whole log,
//! `f(g(z)) = z`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Chain, ChainComplex, HomologyResult};
use crate::error::{Error, Result};
use crate::simplify::{OperationKind, OperationLog, OperationRecord, RecordDetail};

fn add(chain: &mut Chain, id: usize, v: BigInt) {
    if v.is_zero() {
        return;
    }
    let e = chain.entry(id).or_insert_with(BigInt::zero);
    *e += v;
    if e.is_zero() {
        chain.remove(&id);
    }
}

fn g_step(r: &OperationRecord, p: usize, chain: &mut Chain) {
    let RecordDetail::Merge {
        absorbed,
        survivor,
        incidence_absorbed,
        incidence_survivor,
        terms,
    } = &r.detail
    else {
        return;
    };
    match r.kind {
        OperationKind::Removal if p == r.dim + 1 => {
            if let Some(zb) = chain.get(survivor).cloned() {
                add(chain, *absorbed, -zb * incidence_survivor * incidence_absorbed);
            }
        }
        OperationKind::Contraction if p == r.dim => {
            let s: BigInt = terms
                .iter()
                .filter_map(|(x, v)| chain.get(x).map(|z| z * v))
                .sum();
            add(chain, r.cell, -s * incidence_absorbed);
        }
        _ => {}
    }
}

fn f_step(r: &OperationRecord, p: usize, chain: &mut Chain) {
    match &r.detail {
        RecordDetail::Merge {
            absorbed,
            survivor,
            incidence_absorbed,
            incidence_survivor,
            terms,
        } => match r.kind {
            OperationKind::Removal => {
                if p == r.dim {
                    if let Some(zc) = chain.remove(&r.cell) {
                        for (y, v) in terms {
                            add(chain, *y, -(&zc * incidence_absorbed * v));
                        }
                    }
                } else if p == r.dim + 1 {
                    chain.remove(absorbed);
                }
            }
            OperationKind::Contraction => {
                if p + 1 == r.dim {
                    if let Some(za) = chain.remove(absorbed) {
                        add(chain, *survivor, -za * incidence_absorbed * incidence_survivor);
                    }
                } else if p == r.dim {
                    chain.remove(&r.cell);
                }
            }
        },
        RecordDetail::Collapse { pairs } => {
            for pair in pairs {
                if p == pair.lower.dim {
                    if let Some(z) = chain.remove(&pair.lower.id) {
                        for (y, v) in &pair.rest {
                            add(chain, *y, -(&z * pair.incidence * v));
                        }
                    }
                } else if p == pair.upper.dim {
                    chain.remove(&pair.upper.id);
                }
            }
        }
    }
}

fn check_basis(log: &OperationLog, p: usize, chain: &Chain) -> Result<()> {
    let size = log.final_cells.get(p).map_or(0, Vec::len);
    match chain.keys().next_back() {
        Some(&k) if k >= size => Err(Error::LogMismatch(format!(
            "chain index {k} outside the {size} final {p}-cells"
        ))),
        _ => Ok(()),
    }
}

/// Lifts a `p`-chain over the simplified basis to a chain over the
/// initial basis by the maps `g` of every record, last to first.
pub fn project_chain(log: &OperationLog, p: usize, chain: &Chain) -> Result<Chain> {
    check_basis(log, p, chain)?;
    let mut out: Chain = chain
        .iter()
        .map(|(&k, v)| (log.final_cells[p][k], v.clone()))
        .collect();
    for r in log.records.iter().rev() {
        g_step(r, p, &mut out);
    }
    Ok(out)
}

/// Pushes a `p`-chain over the initial basis forward by the maps `f` of
/// every record and returns it over the simplified basis.
pub fn apply_f(log: &OperationLog, p: usize, chain: &Chain) -> Result<Chain> {
    let mut out = chain.clone();
    for r in &log.records {
        f_step(r, p, &mut out);
    }
    let ids = log.final_cells.get(p).map(Vec::as_slice).unwrap_or(&[]);
    out.into_iter()
        .map(|(id, v)| {
            ids.iter()
                .position(|&x| x == id)
                .map(|k| (k, v))
                .ok_or_else(|| Error::LogMismatch(format!("{p}-cell {id} is not in the final map")))
        })
        .collect()
}

/// Projects every free generator of `result` onto `original`.
pub fn project_generators(result: &HomologyResult, log: &OperationLog, original: &ChainComplex) -> Result<Vec<Vec<Chain>>> {
    if original.sizes() != log.initial.cell_counts {
        return Err(Error::LogMismatch("original complex does not match the log".into()));
    }
    if result.generators.len() != log.final_cells.len() {
        return Err(Error::LogMismatch("result dimension does not match the log".into()));
    }
    result
        .generators
        .iter()
        .enumerate()
        .map(|(p, gens)| gens.iter().map(|z| project_chain(log, p, z)).collect())
        .collect()
}
