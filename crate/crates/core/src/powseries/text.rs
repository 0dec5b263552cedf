//! Text grammar for polynomials: terms `c*X^i` joined by `+`/`-`.
//!
//! Whitespace is ignored, coefficients are decimal integers reduced modulo
//! `p^N`, and bivariate input may multiply in a second variable
//! (`3*X^2*T`).

use thiserror::Error;

use crate::algebra;
use crate::padic::{PadicContext, Zpk};

use super::PadicPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty polynomial")]
    Empty,
    #[error("unexpected character {found:?} at position {pos} in {input:?}")]
    Unexpected {
        input: String,
        pos: usize,
        found: char,
    },
    #[error("missing exponent after '^' at position {pos} in {input:?}")]
    MissingExponent { input: String, pos: usize },
    #[error("exponent too large in {0:?}")]
    ExponentTooLarge(String),
}

/// One parsed monomial: coefficient residue and exponents per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Term {
    pub coeff: u64,
    pub exps: Vec<u32>,
}

const MAX_EXPONENT: u32 = 100_000;

pub(crate) fn parse_terms(ring: &Zpk, input: &str, vars: &[char]) -> Result<Vec<Term>, ParseError> {
    let chars: Vec<(usize, char)> = input
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    if chars.is_empty() {
        return Err(ParseError::Empty);
    }
    let unexpected = |i: usize| {
        let (pos, found) = chars.get(i).copied().unwrap_or((input.len(), '\0'));
        ParseError::Unexpected {
            input: input.to_string(),
            pos,
            found,
        }
    };

    let mut terms = Vec::new();
    let mut i = 0;
    let mut first = true;
    while i < chars.len() {
        let mut negative = false;
        match chars[i].1 {
            '+' => i += 1,
            '-' => {
                negative = true;
                i += 1;
            }
            _ if first => {}
            _ => return Err(unexpected(i)),
        }
        first = false;

        let mut coeff = 1 % ring.modulus();
        let mut exps = vec![0u32; vars.len()];
        let mut factors = 0;
        while let Some(&(_, c)) = chars.get(i) {
            if c.is_ascii_digit() {
                let mut value: u128 = 0;
                while let Some(&(_, d)) = chars.get(i) {
                    let Some(digit) = d.to_digit(10) else { break };
                    value = (value * 10 + digit as u128) % ring.modulus() as u128;
                    i += 1;
                }
                coeff = ring.mul(coeff, value as u64);
            } else if let Some(k) = vars.iter().position(|&v| v == c) {
                i += 1;
                let mut e = 1u32;
                if chars.get(i).map(|x| x.1) == Some('^') {
                    i += 1;
                    let start = i;
                    let mut value: u64 = 0;
                    while let Some(&(_, d)) = chars.get(i) {
                        let Some(digit) = d.to_digit(10) else { break };
                        value = value * 10 + digit as u64;
                        if value > MAX_EXPONENT as u64 {
                            return Err(ParseError::ExponentTooLarge(input.to_string()));
                        }
                        i += 1;
                    }
                    if i == start {
                        return Err(ParseError::MissingExponent {
                            input: input.to_string(),
                            pos: chars.get(start - 1).map_or(input.len(), |x| x.0),
                        });
                    }
                    e = value as u32;
                }
                exps[k] += e;
            } else {
                return Err(unexpected(i));
            }
            factors += 1;
            match chars.get(i).map(|x| x.1) {
                Some('*') => i += 1,
                Some(c) if c.is_ascii_digit() || vars.contains(&c) => {}
                _ => break,
            }
        }
        if factors == 0 {
            return Err(unexpected(i));
        }
        if negative {
            coeff = ring.neg(coeff);
        }
        terms.push(Term { coeff, exps });
    }
    Ok(terms)
}

pub(crate) fn parse_univariate(
    ctx: &PadicContext,
    input: &str,
    var: char,
) -> Result<PadicPoly, ParseError> {
    let ring = ctx.ring();
    let terms = parse_terms(ring, input, &[var])?;
    let deg = terms.iter().map(|t| t.exps[0] as usize).max().unwrap_or(0);
    let mut coeffs = vec![0u64; deg + 1];
    for t in terms {
        let slot = &mut coeffs[t.exps[0] as usize];
        *slot = ring.add(*slot, t.coeff);
    }
    Ok(PadicPoly::from_trimmed(ctx, algebra::trim(ring, coeffs)))
}

fn write_monomial(out: &mut String, coeff: i128, monomial: &str) {
    let body = if monomial.is_empty() {
        coeff.abs().to_string()
    } else if coeff.abs() == 1 {
        monomial.to_string()
    } else {
        format!("{}*{monomial}", coeff.abs())
    };
    if coeff < 0 {
        out.push('-');
    } else if !out.is_empty() {
        out.push('+');
    }
    out.push_str(&body);
}

pub(crate) fn power(var: char, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

pub(crate) fn format_terms<'a>(
    ring: &Zpk,
    terms: impl Iterator<Item = (u64, String)> + 'a,
) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        if c != 0 {
            write_monomial(&mut out, ring.balanced(c), &mono);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn format_univariate(ctx: &PadicContext, coeffs: &[u64], var: char) -> String {
    format_terms(
        ctx.ring(),
        coeffs
            .iter()
            .enumerate()
            .rev()
            .map(|(i, &c)| (c, power(var, i as u32))),
    )
}
