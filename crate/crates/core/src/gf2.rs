//! Rank of bit matrices over the two-element field.

/// Rank over GF(2) of the matrix whose rows are the given bit vectors.
///
/// Rows may have different lengths; missing words are zero. The input is
/// consumed as scratch space.
pub fn rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let mut pivot_row = 0;
    let words = rows.iter().map(Vec::len).max().unwrap_or(0);
    for w in 0..words {
        for b in 0..64 {
            let mask = 1u64 << b;
            let Some(found) =
                (pivot_row..rows.len()).find(|&r| rows[r].get(w).is_some_and(|x| x & mask != 0))
            else {
                continue;
            };
            rows.swap(pivot_row, found);
            let pivot = std::mem::take(&mut rows[pivot_row]);
            for row in rows.iter_mut().skip(pivot_row + 1) {
                if row.get(w).is_some_and(|x| x & mask != 0) {
                    for (i, p) in pivot.iter().enumerate().skip(w) {
                        row[i] ^= p;
                    }
                }
            }
            rows[pivot_row] = pivot;
            pivot_row += 1;
            rank += 1;
            if pivot_row == rows.len() {
                return rank;
            }
        }
    }
    rank
}

/// Rank of at most 64 single-word rows. The slice is used as scratch space.
pub fn rank_words(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let pivot = rows[i];
        if pivot == 0 {
            continue;
        }
        rank += 1;
        let low = pivot & pivot.wrapping_neg();
        for row in rows[i + 1..].iter_mut() {
            if *row & low != 0 {
                *row ^= pivot;
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        assert_eq!(rank(vec![]), 0);
        assert_eq!(rank(vec![vec![0], vec![0]]), 0);
        assert_eq!(rank(vec![vec![0b11], vec![0b11]]), 1);
        assert_eq!(rank(vec![vec![0b100], vec![0b001]]), 2);
        // 0b011 ^ 0b110 = 0b101
        assert_eq!(rank(vec![vec![0b011], vec![0b110], vec![0b101]]), 2);
        assert_eq!(rank(vec![vec![0, 1], vec![1]]), 2);
    }

    #[test]
    fn word_rank_agrees() {
        let rows = [0b011u64, 0b110, 0b101, 0b1000, 0];
        assert_eq!(rank_words(&mut rows.clone()), 3);
        assert_eq!(rank(rows.iter().map(|&r| vec![r]).collect()), 3);
        assert_eq!(rank_words(&mut []), 0);
    }

    #[test]
    fn identity_has_full_rank() {
        let rows = (0..130)
            .map(|i| {
                let mut r = vec![0u64; 3];
                r[i / 64] |= 1 << (i % 64);
                r
            })
            .collect();
        assert_eq!(rank(rows), 130);
    }
}
