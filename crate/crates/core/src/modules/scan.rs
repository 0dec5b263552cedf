use rayon::prelude::*;
use serde::Serialize;

use crate::padic::PadicInt;
use crate::primes::{HeightOnePrime, PrimeJson};
use crate::result::CardinalityResult;

use super::fiber::{coinvariants, specialize};
use super::{CyclicPresentation, ModuleError, WildCharacter};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanCell {
    /// Position in [`ScanReport::primes`].
    pub prime: usize,
    pub level: u32,
    pub result: CardinalityResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub lambda: i64,
    /// Prime-major, level-minor.
    pub cells: Vec<ScanCell>,
    pub all_finite: bool,
}

/// Coinvariant cardinalities of `M(θ)/QM(θ)` over a grid of twists,
/// primes and levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub p: u64,
    pub n_max: u32,
    pub primes: Vec<PrimeJson>,
    pub rows: Vec<ScanRow>,
    /// `lambda` of every row that is finite at every tested `(Q, n)`.
    pub admissible: Vec<i64>,
}

/// Evaluates every `(lambda, Q)` pair for levels `0..=n_max`. Pairs run on
/// the rayon pool unless `serial` is set; results are merged by grid index
/// either way, so the report does not depend on scheduling.
pub fn twist_scan(
    m: &CyclicPresentation,
    lambdas: &[PadicInt],
    primes: &[HeightOnePrime],
    n_max: u32,
    serial: bool,
) -> Result<ScanReport, ModuleError> {
    if lambdas.is_empty() || primes.is_empty() {
        return Err(ModuleError::EmptyScan);
    }
    if primes.iter().any(|q| q.poly().is_none()) {
        return Err(ModuleError::PPrime);
    }
    let ctx = *m.context();
    let grid: Vec<(usize, usize)> = (0..lambdas.len())
        .flat_map(|i| (0..primes.len()).map(move |j| (i, j)))
        .collect();
    let cell = |&(i, j): &(usize, usize)| -> Result<Vec<ScanCell>, ModuleError> {
        let twisted = m.twist(&WildCharacter::new(lambdas[i]));
        let sm = specialize(&twisted, &primes[j])?;
        Ok((0..=n_max)
            .map(|level| ScanCell {
                prime: j,
                level,
                result: coinvariants(&sm, level),
            })
            .collect())
    };
    let computed: Vec<Result<Vec<ScanCell>, ModuleError>> = if serial {
        grid.iter().map(cell).collect()
    } else {
        grid.par_iter().map(cell).collect()
    };

    let mut rows: Vec<ScanRow> = lambdas
        .iter()
        .map(|l| ScanRow {
            lambda: ctx.ring().balanced(l.residue()) as i64,
            cells: Vec::new(),
            all_finite: true,
        })
        .collect();
    for ((i, _), cells) in grid.iter().zip(computed) {
        rows[*i].cells.extend(cells?);
    }
    for row in &mut rows {
        row.all_finite = row.cells.iter().all(|c| c.result.is_finite());
    }
    let admissible = rows
        .iter()
        .filter(|r| r.all_finite)
        .map(|r| r.lambda)
        .collect();
    Ok(ScanReport {
        p: ctx.p(),
        n_max,
        primes: primes.iter().map(|q| q.to_json(ctx.p())).collect(),
        rows,
        admissible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::BivarPoly;
    use crate::padic::PadicContext;
    use crate::primes::{arith_prime, bad_prime_set, ArithPrimeSpec};

    fn ctx() -> PadicContext {
        PadicContext::new(3, 12, 4).unwrap()
    }

    fn auto_primes(c: &PadicContext) -> Vec<HeightOnePrime> {
        let mut out = Vec::new();
        for r in 0..=1 {
            for k in 1..=2 {
                out.push(arith_prime(c, ArithPrimeSpec { k, r }).unwrap());
            }
        }
        out
    }

    #[test]
    fn trivial_action_module() {
        let c = ctx();
        let m = CyclicPresentation::new(vec![
            BivarPoly::parse(&c, "T").unwrap(),
            BivarPoly::parse(&c, "X-3").unwrap(),
        ])
        .unwrap();
        let lambdas: Vec<_> = (0..3).map(|l| c.int(l)).collect();
        let report = twist_scan(&m, &lambdas, &auto_primes(&c), 1, false).unwrap();
        assert!(!report.rows[0].all_finite);
        assert!(report.rows[0].cells[0].result.is_infinite());
        assert_eq!(report.admissible, vec![1, 2]);
        // λ = 1 at (X - 3), n = 1: Z_3/(4^{-3} - 1)
        assert_eq!(report.rows[1].cells[1].result, CardinalityResult::finite(2));
        assert_eq!(
            report,
            twist_scan(&m, &lambdas, &auto_primes(&c), 1, true).unwrap()
        );
    }

    #[test]
    fn bad_primes_are_infinite_at_their_level() {
        let c = ctx();
        let m = CyclicPresentation::diagonal(&c);
        for lambda in 0..3 {
            let lam = c.int(lambda);
            let set = bad_prime_set(&lam, 1).unwrap();
            let report = twist_scan(&m, &[lam], &set.primes, 1, false).unwrap();
            for cell in &report.rows[0].cells {
                // F_j is bad from level j on
                assert_eq!(
                    cell.result.is_infinite(),
                    cell.level as usize >= cell.prime,
                    "{cell:?}"
                );
            }
        }
    }

    #[test]
    fn always_bad_prime_empties_the_admissible_set() {
        let c = ctx();
        let m = CyclicPresentation::diagonal(&c);
        let lambdas: Vec<_> = (0..3).map(|l| c.int(l)).collect();
        let primes: Vec<_> = (0..3)
            .map(|l| HeightOnePrime::parse(&c, &format!("X-{}", 3 * l), false).unwrap())
            .collect();
        let report = twist_scan(&m, &lambdas, &primes, 0, false).unwrap();
        assert!(report.admissible.is_empty());
        assert!(twist_scan(&m, &[], &primes, 0, false).is_err());
    }
}
