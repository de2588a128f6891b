//! Exact rank of sparse matrices by column reduction.
//!
//! Columns are processed left to right and reduced against earlier columns
//! sharing their lowest nonzero row, as in the standard persistence
//! reduction. Over the rationals every step is fraction-free
//! (`col <- p * col - c * other`) followed by division by the column content,
//! so no rounding ever happens. Entries are held in `i128`; if that
//! overflows the computation is redone with arbitrary precision.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};

type Column<T> = Vec<(u32, T)>;

fn content<T: Clone + Integer + Signed>(col: &Column<T>) -> T {
    let mut g = T::zero();
    for (_, v) in col {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

// p * a - c * b, merging sorted columns; None on overflow
fn combine<T>(a: &Column<T>, p: &T, b: &Column<T>, c: &T) -> Option<Column<T>>
where
    T: Clone + Integer + Signed + CheckedMul + CheckedSub,
{
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push((a[i].0, p.checked_mul(&a[i].1)?));
            i += 1;
        } else if take_b {
            let v = T::zero().checked_sub(&c.checked_mul(&b[j].1)?)?;
            out.push((b[j].0, v));
            j += 1;
        } else {
            let v = p.checked_mul(&a[i].1)?.checked_sub(&c.checked_mul(&b[j].1)?)?;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

fn integer_pivots<T>(columns: &[Vec<(u32, i64)>], skip: &[bool]) -> Option<Vec<u32>>
where
    T: Clone + Integer + Signed + CheckedMul + CheckedSub + From<i64>,
{
    let mut reduced: Vec<Column<T>> = Vec::new();
    let mut pivot_of: HashMap<u32, usize> = HashMap::new();
    for (c, col) in columns.iter().enumerate() {
        if skip.get(c).copied().unwrap_or(false) {
            continue;
        }
        let mut cur: Column<T> = col
            .iter()
            .filter(|(_, v)| *v != 0)
            .map(|&(r, v)| (r, T::from(v)))
            .collect();
        while let Some((low, c)) = cur.last().cloned() {
            let Some(&other) = pivot_of.get(&low) else {
                break;
            };
            let p = reduced[other].last().unwrap().1.clone();
            let g = p.gcd(&c);
            let (p, c) = (p / g.clone(), c / g);
            cur = combine(&cur, &p, &reduced[other], &c)?;
            let ct = content(&cur);
            if !ct.is_zero() && !ct.is_one() {
                for (_, v) in cur.iter_mut() {
                    *v = v.clone() / ct.clone();
                }
            }
        }
        if let Some(&(low, _)) = cur.last() {
            pivot_of.insert(low, reduced.len());
            reduced.push(cur);
        }
    }
    Some(reduced.iter().map(|c| c.last().unwrap().0).collect())
}

/// Pivot rows of the reduced matrix over the rationals, skipping the
/// columns flagged in `skip`.
pub fn pivots_rational(columns: &[Vec<(u32, i64)>], skip: &[bool]) -> Vec<u32> {
    integer_pivots::<i128>(columns, skip)
        .or_else(|| integer_pivots::<BigInt>(columns, skip))
        .expect("arbitrary precision cannot overflow")
}

/// Rank over the rationals of a matrix given by sorted sparse columns.
pub fn rank_rational(columns: &[Vec<(u32, i64)>]) -> usize {
    pivots_rational(columns, &[]).len()
}

// symmetric difference of sorted row lists
fn xor_into(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Pivot rows of the reduced matrix over the field with two elements,
/// skipping the columns flagged in `skip`. Odd entries count as one.
pub fn pivots_mod2(columns: &[Vec<(u32, i64)>], skip: &[bool]) -> Vec<u32> {
    let mut reduced: Vec<Vec<u32>> = Vec::new();
    let mut pivot_of: HashMap<u32, usize> = HashMap::new();
    for (c, col) in columns.iter().enumerate() {
        if skip.get(c).copied().unwrap_or(false) {
            continue;
        }
        let mut cur: Vec<u32> = col
            .iter()
            .filter(|(_, v)| v.rem_euclid(2) == 1)
            .map(|&(r, _)| r)
            .collect();
        while let Some(&low) = cur.last() {
            let Some(&other) = pivot_of.get(&low) else {
                break;
            };
            cur = xor_into(&cur, &reduced[other]);
        }
        if let Some(&low) = cur.last() {
            pivot_of.insert(low, reduced.len());
            reduced.push(cur);
        }
    }
    reduced.iter().map(|c| *c.last().unwrap()).collect()
}

/// Rank over the field with two elements.
pub fn rank_mod2(columns: &[Vec<(u32, i64)>]) -> usize {
    pivots_mod2(columns, &[]).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_to_cols(rows: &[&[i64]]) -> Vec<Vec<(u32, i64)>> {
        let ncols = rows[0].len();
        (0..ncols)
            .map(|c| {
                rows.iter()
                    .enumerate()
                    .filter(|(_, r)| r[c] != 0)
                    .map(|(i, r)| (i as u32, r[c]))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn small_ranks() {
        let m = dense_to_cols(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank_rational(&m), 2);
        let m2 = dense_to_cols(&[&[2, 0], &[0, 2]]);
        assert_eq!(rank_rational(&m2), 2);
        assert_eq!(rank_mod2(&m2), 0);
        let zero = dense_to_cols(&[&[0, 0], &[0, 0]]);
        assert_eq!(rank_rational(&zero), 0);
    }

    #[test]
    fn big_entries_fall_back_to_bigint() {
        let big = 1i64 << 62;
        let m = dense_to_cols(&[&[big, big - 1, 3], &[big - 1, big, 5], &[7, 11, big]]);
        // overflow in i128 is not guaranteed here, but the answer must be exact either way
        assert_eq!(integer_pivots::<BigInt>(&m, &[]).map(|p| p.len()), Some(3));
        assert_eq!(rank_rational(&m), 3);
    }

    #[test]
    fn agrees_with_bigint_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let r = rng.gen_range(1..7);
            let c = rng.gen_range(1..7);
            let cols: Vec<Vec<(u32, i64)>> = (0..c)
                .map(|_| {
                    (0..r)
                        .filter_map(|i| {
                            let v: i64 = rng.gen_range(-3..=3);
                            (v != 0).then_some((i as u32, v))
                        })
                        .collect()
                })
                .collect();
            assert_eq!(integer_pivots::<i128>(&cols, &[]), integer_pivots::<BigInt>(&cols, &[]));
        }
    }
}
