//! Shared test helpers, including an oracle that checks automorphisms against
//! the raw relations by exact arithmetic in Z[xi]. The oracle substitutes the
//! transformed coordinates directly into every relation term and compares
//! coefficients; it does not go through the equation generator, the parametric
//! solver, or the coefficient-action machinery it is used to check.

#![allow(dead_code)] // shared by several test targets, each using a subset

use std::collections::BTreeMap;

use godeaux_core::config::CaseConfig;
use godeaux_core::group::{embed, GroupElement};
use godeaux_core::strat::Stratum;

/// Reduce an integer combination of xi^0..xi^{nu-1} modulo the minimal
/// polynomial of a primitive nu-th root of unity, to a canonical vector.
pub fn cyclo_reduce(nu: u32, v: &[i64]) -> Vec<i64> {
    let n = nu as usize;
    assert_eq!(v.len(), n);
    match nu {
        3 | 5 => {
            // 1 + x + ... + x^{nu-1} = 0
            let last = v[n - 1];
            let mut out: Vec<i64> = v.iter().map(|&c| c - last).collect();
            out[n - 1] = 0;
            out
        }
        4 => {
            // x^2 = -1
            vec![v[0] - v[2], v[1] - v[3], 0, 0]
        }
        _ => panic!("unsupported modulus"),
    }
}

type FormalSum = BTreeMap<Option<usize>, Vec<i64>>;

fn add_term(sum: &mut FormalSum, nu: u32, key: Option<usize>, coeff: i64, exp: u32) {
    let v = sum.entry(key).or_insert_with(|| vec![0i64; nu as usize]);
    v[(exp % nu) as usize] += coeff;
}

fn normalized(sum: &FormalSum, nu: u32) -> BTreeMap<Option<usize>, Vec<i64>> {
    sum.iter()
        .map(|(k, v)| (*k, cyclo_reduce(nu, v)))
        .filter(|(_, v)| v.iter().any(|&c| c != 0))
        .collect()
}

/// Symbolic value of each coefficient on a stratum: `None` for vanished,
/// otherwise `xi^exp * z_root` for the root coordinate of its linked class.
pub fn stratum_values(case: &CaseConfig, s: &Stratum) -> Vec<Option<(usize, u32)>> {
    (0..case.mod_pars.len())
        .map(|p| {
            if s.vanished.contains(&p) {
                None
            } else {
                match s.ratios.get(&p) {
                    Some(&(root, exp)) => Some((root, exp)),
                    None => Some((p, 0)),
                }
            }
        })
        .collect()
}

/// Whether the element transforms every relation into `xi^m` times itself on
/// the generic point of the stratum, for some per-relation exponent m pinned
/// by the constant monomials.
pub fn relation_preserved(case: &CaseConfig, el: &GroupElement, s: &Stratum) -> bool {
    let nu = case.nu;
    let emb = embed(case, el).expect("element belongs to the case");
    let values = stratum_values(case, s);
    for rel in &case.relations {
        // transformed coefficient of every monomial, as a formal sum over the
        // stratum coordinates z_root and the constant 1
        let mut transformed: BTreeMap<Vec<u32>, FormalSum> = BTreeMap::new();
        for (form, mono) in &rel.terms {
            let mut img = vec![0u32; mono.len()];
            let mut e = 0u32;
            for (c, &ex) in mono.iter().enumerate() {
                img[emb.perm[c]] = ex;
                e = (e + ex * emb.diag[c]) % nu;
            }
            let entry = transformed.entry(img).or_default();
            if form.konst != 0 {
                add_term(entry, nu, None, form.konst, e);
            }
            for (&sym, &g) in &form.syms {
                if let Some((root, exp)) = values[sym] {
                    add_term(entry, nu, Some(root), g, (e + exp) % nu);
                }
            }
        }
        // multiplier exponent from the first constant monomial
        let mut multiplier: Option<u32> = None;
        for (form, mono) in &rel.terms {
            if form.syms.is_empty() && form.konst != 0 {
                let mut e = 0u32;
                for (c, &ex) in mono.iter().enumerate() {
                    e = (e + ex * emb.diag[c]) % nu;
                }
                multiplier = Some(e);
                break;
            }
        }
        let m = multiplier.expect("every relation has a constant monomial");
        // a nonzero transformed coefficient outside the relation's monomial
        // set can never be matched
        for (img, sum) in &transformed {
            if !normalized(sum, nu).is_empty() && !rel.terms.iter().any(|(_, mono)| mono == img) {
                return false;
            }
        }
        // compare against xi^m * (original with substituted values)
        for (form, mono) in &rel.terms {
            let mut expect: FormalSum = BTreeMap::new();
            if form.konst != 0 {
                add_term(&mut expect, nu, None, form.konst, m);
            }
            for (&sym, &g) in &form.syms {
                if let Some((root, exp)) = values[sym] {
                    add_term(&mut expect, nu, Some(root), g, (m + exp) % nu);
                }
            }
            let got = transformed.get(mono).cloned().unwrap_or_default();
            if normalized(&got, nu) != normalized(&expect, nu) {
                return false;
            }
        }
    }
    true
}
