//! Instance codes for tuples of relations and their ranks.
//!
//! An instance of `k` relations over `tuples` tuples is a bit string of
//! length `k * tuples`; its rank is that string read as a binary number,
//! most significant bit first.

use super::formula::InstanceOrder;
use super::LogicError;

/// Position in the code of the bit saying whether tuple `j` is in relation
/// `i` (both 0-based).
pub fn code_position(order: InstanceOrder, i: usize, j: usize, k: usize, tuples: usize) -> usize {
    match order {
        InstanceOrder::Interleaved => j * k + i,
        InstanceOrder::Concatenated => i * tuples + j,
    }
}

fn total_bits(k: usize, tuples: usize) -> Result<usize, LogicError> {
    let bits = k * tuples;
    if bits > 63 {
        return Err(LogicError::InstanceCapExceeded {
            needed: format!("2^{bits}"),
            cap: 1 << 63,
        });
    }
    Ok(bits)
}

/// Rank of the instance given as one membership vector per relation.
pub fn instance_rank(sets: &[Vec<bool>], order: InstanceOrder) -> Result<u64, LogicError> {
    let k = sets.len();
    let tuples = sets.first().map_or(0, Vec::len);
    assert!(sets.iter().all(|s| s.len() == tuples), "relations of different sizes");
    let bits = total_bits(k, tuples)?;
    let mut rank = 0u64;
    for (i, set) in sets.iter().enumerate() {
        for (j, &b) in set.iter().enumerate() {
            if b {
                rank |= 1 << (bits - 1 - code_position(order, i, j, k, tuples));
            }
        }
    }
    Ok(rank)
}

/// Inverse of [`instance_rank`].
pub fn instance_unrank(rank: u64, k: usize, tuples: usize, order: InstanceOrder) -> Result<Vec<Vec<bool>>, LogicError> {
    let bits = total_bits(k, tuples)?;
    if bits < 64 && rank >> bits != 0 {
        return Err(LogicError::RankOutOfRange { rank, bits });
    }
    let mut sets = vec![vec![false; tuples]; k];
    for (i, set) in sets.iter_mut().enumerate() {
        for (j, slot) in set.iter_mut().enumerate() {
            *slot = (rank >> (bits - 1 - code_position(order, i, j, k, tuples))) & 1 == 1;
        }
    }
    Ok(sets)
}
