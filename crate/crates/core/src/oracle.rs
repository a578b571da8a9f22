//! Brute-force search for generalized inverses.
//!
//! Candidates `ν` range over every probability vector on a finite universe
//! whose entries are fractions with denominator at most `D` (Farey values).
//! The only algebra used is convolution: with `c_u = μ ⋆ δ_u ⋆ μ`, bilinearity
//! gives `μ ⋆ ν ⋆ μ = Σ_u ν(u) c_u`, and every candidate is compared with `μ`
//! in exact integer arithmetic. Nothing here touches the support tables,
//! operator matrices or the simplex solver.

use num::integer::lcm;
use num::{BigInt, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{ElementIndex, Group, GroupElement};
use crate::measure::{convolve, Measure};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_atoms: usize,
    /// Enumeration nodes visited before giving up.
    pub max_candidates: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_atoms: 12,
            max_candidates: 50_000_000,
        }
    }
}

/// The subgroup generated by `S(mu)`, capped at `cap` elements.
pub fn generated_universe(group: &Group, mu: &Measure, cap: usize) -> Result<Vec<GroupElement>> {
    group.closure(&mu.support(), cap)
}

/// Farey values in `[0, 1]` with denominator at most `max_denominator`, as
/// numerators over `lcm(1..=max_denominator)`, largest first.
fn farey_numerators(max_denominator: u32) -> Option<(i128, Vec<i128>)> {
    let mut common: i128 = 1;
    for d in 1..=max_denominator as i128 {
        common = common.checked_mul(d / num::integer::gcd(common, d))?;
    }
    let mut values: Vec<i128> = (1..=max_denominator as i128)
        .flat_map(|b| (0..=b).map(move |a| a * (common / b)))
        .collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.dedup();
    Some((common, values))
}

fn to_i128(value: &BigInt) -> Option<i128> {
    value.to_i128()
}

/// Returns the first `ν` in enumeration order with `μ ⋆ ν ⋆ μ = μ`.
///
/// Enumeration is lexicographic over the universe order with each weight
/// running from largest to smallest, so point masses on early elements come
/// first.
pub fn brute_force_ginverse(
    group: &Group,
    mu: &Measure,
    max_denominator: u32,
    universe: &[GroupElement],
    budget: &OracleBudget,
) -> Result<Option<Measure>> {
    if max_denominator == 0 {
        return Err(Error::UniverseTooLarge(
            "max denominator must be at least 1".into(),
        ));
    }
    let mut dedup = ElementIndex::new(group);
    for g in universe {
        dedup.insert(g.clone())?;
    }
    let universe = dedup.into_elements();
    if universe.is_empty() {
        return Ok(None);
    }
    if universe.len() > budget.max_atoms {
        return Err(Error::UniverseTooLarge(format!(
            "{} atoms exceeds the budget of {}",
            universe.len(),
            budget.max_atoms
        )));
    }
    let (common, values) = farey_numerators(max_denominator).ok_or_else(|| {
        Error::UniverseTooLarge(format!(
            "denominator grid for D = {max_denominator} overflows"
        ))
    })?;

    // Columns c_u = μ ⋆ δ_u ⋆ μ on a shared atom index.
    let mut rows = ElementIndex::new(group);
    for (g, _) in mu.atoms() {
        rows.insert(g.clone())?;
    }
    let mut columns: Vec<Vec<(usize, Rational)>> = Vec::with_capacity(universe.len());
    for u in &universe {
        let du = Measure::dirac(group, u.clone())?;
        let column = convolve(group, &convolve(group, mu, &du)?, mu)?;
        let mut entries = Vec::with_capacity(column.len());
        for (g, w) in column.atoms() {
            entries.push((rows.insert(g.clone())?, w.clone()));
        }
        columns.push(entries);
    }
    let height = rows.len();

    // Scale to integers: Q C ν_num = Q L α, with ν = ν_num / L.
    let mut scale = BigInt::from(1);
    for (_, w) in mu.atoms() {
        scale = lcm(scale, w.denom().clone());
    }
    for column in &columns {
        for (_, w) in column {
            scale = lcm(scale, w.denom().clone());
        }
    }
    let overflow = || Error::UniverseTooLarge("weights too large for exact enumeration".into());
    let mut matrix = vec![vec![0i128; universe.len()]; height];
    let mut column_max: i128 = 0;
    for (u, column) in columns.iter().enumerate() {
        for (i, w) in column {
            let scaled = to_i128(&(w.numer() * (&scale / w.denom()))).ok_or_else(overflow)?;
            matrix[*i][u] = scaled;
            column_max = column_max.max(scaled);
        }
    }
    let mut target = vec![0i128; height];
    let mut weights_by_row = vec![Rational::zero(); height];
    for (g, w) in mu.atoms() {
        let i = rows.find(g)?.expect("inserted above");
        weights_by_row[i] = w.clone();
    }
    for (i, w) in weights_by_row.iter().enumerate() {
        let scaled = w.numer() * (&scale / w.denom()) * BigInt::from(common);
        target[i] = to_i128(&scaled).ok_or_else(overflow)?;
    }
    // Accumulators stay below target + one column step.
    column_max
        .checked_mul(common)
        .and_then(|v| v.checked_mul(4))
        .ok_or_else(overflow)?;

    let mut search = Search {
        matrix: &matrix,
        target: &target,
        values: &values,
        width: universe.len(),
        visited: 0,
        budget: budget.max_candidates,
        chosen: vec![0; universe.len()],
    };
    let mut acc = vec![0i128; height];
    let found = search.descend(0, common, &mut acc)?;
    if !found {
        return Ok(None);
    }
    let nu = Measure::from_atoms(
        group,
        universe
            .iter()
            .zip(&search.chosen)
            .filter(|(_, &n)| n != 0)
            .map(|(g, &n)| {
                (
                    g.clone(),
                    Rational::new(BigInt::from(n), BigInt::from(common)),
                )
            }),
    )?;
    let check = convolve(group, &convolve(group, mu, &nu)?, mu)?;
    assert_eq!(
        &check, mu,
        "oracle candidate must satisfy mu * nu * mu = mu"
    );
    Ok(Some(nu))
}

struct Search<'a> {
    matrix: &'a [Vec<i128>],
    target: &'a [i128],
    values: &'a [i128],
    width: usize,
    visited: u64,
    budget: u64,
    chosen: Vec<i128>,
}

impl Search<'_> {
    fn descend(&mut self, position: usize, remaining: i128, acc: &mut [i128]) -> Result<bool> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::UniverseTooLarge(format!(
                "more than {} enumeration steps",
                self.budget
            )));
        }
        let last = position + 1 == self.width;
        let candidates: Vec<i128> = if last {
            if self.values.binary_search_by(|v| remaining.cmp(v)).is_ok() {
                vec![remaining]
            } else {
                return Ok(false);
            }
        } else {
            self.values
                .iter()
                .copied()
                .filter(|&v| v <= remaining)
                .collect()
        };
        for value in candidates {
            let mut fits = true;
            for (i, row) in self.matrix.iter().enumerate() {
                acc[i] += value * row[position];
                if acc[i] > self.target[i] {
                    fits = false;
                }
            }
            self.chosen[position] = value;
            let hit = fits
                && if last {
                    acc == self.target
                } else {
                    self.descend(position + 1, remaining - value, acc)?
                };
            for (i, row) in self.matrix.iter().enumerate() {
                acc[i] -= value * row[position];
            }
            if hit {
                return Ok(true);
            }
        }
        self.chosen[position] = 0;
        Ok(false)
    }
}
