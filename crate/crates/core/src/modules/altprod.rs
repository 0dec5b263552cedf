use serde::Serialize;

use crate::powseries::{quotient_cardinality, PadicPoly};
use crate::primes::HeightOnePrime;

use super::ModuleError;

/// Characteristic elements `f_1, ..., f_k` of a resolution, as supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionData {
    elements: Vec<PadicPoly>,
}

impl ResolutionData {
    pub fn new(elements: Vec<PadicPoly>) -> Result<Self, ModuleError> {
        if let Some(i) = elements.iter().position(PadicPoly::is_zero) {
            return Err(ModuleError::ZeroElement(i + 1));
        }
        Ok(ResolutionData { elements })
    }

    pub fn elements(&self) -> &[PadicPoly] {
        &self.elements
    }
}

/// `Σ (-1)^{i+1} v_i` with `p^{v_i} = #Z_p[[X]]/(Q, f_i)`.
///
/// Only the exponent is returned: whether the alternating product of the
/// `f_i` is itself a power series is not known in general.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AltProduct {
    /// `v_i` in resolution order, indexed from 1.
    pub exponents: Vec<u64>,
    pub signed_exponent: i64,
}

pub fn alternating_product(
    res: &ResolutionData,
    q: &HeightOnePrime,
) -> Result<AltProduct, ModuleError> {
    let g = q.poly().ok_or(ModuleError::PPrime)?;
    let mut exponents = Vec::with_capacity(res.elements.len());
    let mut total = 0i64;
    for (i, f) in res.elements.iter().enumerate() {
        let result = quotient_cardinality(g, f);
        let Some(v) = result.exponent() else {
            return Err(ModuleError::NonFiniteFactor {
                index: i + 1,
                result,
            });
        };
        exponents.push(v);
        if i % 2 == 0 {
            total += v as i64;
        } else {
            total -= v as i64;
        }
    }
    Ok(AltProduct {
        exponents,
        signed_exponent: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicContext;

    fn ctx() -> PadicContext {
        PadicContext::new(3, 12, 4).unwrap()
    }

    fn res(c: &PadicContext, fs: &[&str]) -> ResolutionData {
        ResolutionData::new(fs.iter().map(|f| PadicPoly::parse(c, f).unwrap()).collect()).unwrap()
    }

    #[test]
    fn examples() {
        let c = ctx();
        let q = HeightOnePrime::parse(&c, "X-3", false).unwrap();
        assert_eq!(
            alternating_product(&res(&c, &["X+3"]), &q)
                .unwrap()
                .signed_exponent,
            1
        );
        assert_eq!(
            alternating_product(&res(&c, &["1"]), &q)
                .unwrap()
                .signed_exponent,
            0
        );
        let f = "X^2+X+6";
        assert_eq!(
            alternating_product(&res(&c, &[f, f]), &q)
                .unwrap()
                .signed_exponent,
            0
        );
        // values at 3: 6, 30, 78 with valuations 1, 1, 1; and 24, 9, 6 with 1, 2, 1
        let a = alternating_product(&res(&c, &["X+3", "X+27", "X+75"]), &q).unwrap();
        assert_eq!((a.exponents.clone(), a.signed_exponent), (vec![1, 1, 1], 1));
        let a = alternating_product(&res(&c, &["X+21", "X+6", "X+3"]), &q).unwrap();
        assert_eq!((a.exponents, a.signed_exponent), (vec![1, 2, 1], 0));
    }

    #[test]
    fn errors_name_the_index() {
        let c = ctx();
        let q = HeightOnePrime::parse(&c, "X-3", false).unwrap();
        match alternating_product(&res(&c, &["X+3", "X-3"]), &q) {
            Err(ModuleError::NonFiniteFactor { index, result }) => {
                assert_eq!(index, 2);
                assert!(result.is_infinite());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            alternating_product(&res(&c, &["X"]), &HeightOnePrime::PPrime),
            Err(ModuleError::PPrime)
        ));
        assert!(matches!(
            ResolutionData::new(vec![PadicPoly::one(&c), PadicPoly::zero(&c)]),
            Err(ModuleError::ZeroElement(2))
        ));
    }
}
