//! Curated small-group catalog.
//!
//! Identification works by fingerprint matching against explicitly
//! constructed model groups, not by isomorphism search. Catalog ids
//! (order, index) are recorded for the groups appearing in the stratification
//! tables; centralizer-only entries carry a structure name without an index.
//! Ambiguity or a missing entry is an error, never a guess.

use std::collections::BTreeMap;

use crate::config::CaseConfig;
use crate::error::{GodeauxError, Result};
use crate::group::{
    ambient_group, fingerprint, CosetGroup, Fingerprint, Group, GroupElement, PermGroup, TupleGroup,
};

/// Catalog label: (order, index) id where the tables print one, plus a
/// human-readable structure name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct CatalogLabel {
    pub order: usize,
    pub index: Option<u32>,
    pub name: String,
}

impl CatalogLabel {
    pub fn id_string(&self) -> String {
        match self.index {
            Some(ix) => format!("({}, {})", self.order, ix),
            None => format!("({}, -)", self.order),
        }
    }
}

impl std::fmt::Display for CatalogLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.name, self.id_string())
    }
}

fn cyclic(n: usize) -> PermGroup {
    let gen: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    PermGroup::from_generators(n, &[gen])
}

fn dihedral(n: usize) -> PermGroup {
    // symmetries of the regular n-gon, order 2n
    let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    PermGroup::from_generators(n, &[rot, refl])
}

fn klein() -> PermGroup {
    PermGroup::from_generators(4, &[vec![1, 0, 2, 3], vec![0, 1, 3, 2]])
}

fn frobenius20() -> PermGroup {
    // affine maps x -> a x + b on Z/5
    let translate: Vec<usize> = (0..5).map(|i| (i + 1) % 5).collect();
    let scale: Vec<usize> = (0..5).map(|i| (2 * i) % 5).collect();
    PermGroup::from_generators(5, &[translate, scale])
}

fn dicyclic(n: usize) -> PermGroup {
    // <a, b | a^{2n} = 1, b^2 = a^n, b a b^-1 = a^-1>, regular representation
    // on the 4n elements a^i b^j
    let total = 4 * n;
    let code = |i: usize, j: usize| -> usize { j * 2 * n + i % (2 * n) };
    let mul = |x: usize, y: usize| -> usize {
        let (i, j) = (x % (2 * n), x / (2 * n));
        let (k, l) = (y % (2 * n), y / (2 * n));
        if j == 0 {
            code((i + k) % (2 * n), l)
        } else if l == 0 {
            code((i + 2 * n - k) % (2 * n), 1)
        } else {
            code((i + 2 * n - k + n) % (2 * n), 0)
        }
    };
    let ga: Vec<usize> = (0..total).map(|x| mul(x, code(1, 0))).collect();
    let gb: Vec<usize> = (0..total).map(|x| mul(x, code(0, 1))).collect();
    PermGroup::from_generators(total, &[ga, gb])
}

fn quaternion8() -> PermGroup {
    // regular representation on {1, i, j, k, -1, -i, -j, -k}
    // right multiplication by i and by j
    let mul = |x: usize, y: usize| -> usize {
        // encode units 0..3 = 1,i,j,k with sign bit 4
        let (sx, ux) = (x / 4, x % 4);
        let (sy, uy) = (y / 4, y % 4);
        let table = [
            // 1*: i*: j*: k*
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let (s, u) = table[ux][uy];
        ((s + sx + sy) % 2) * 4 + u
    };
    let gi: Vec<usize> = (0..8).map(|x| mul(x, 1)).collect();
    let gj: Vec<usize> = (0..8).map(|x| mul(x, 2)).collect();
    PermGroup::from_generators(8, &[gi, gj])
}

/// The whole catalog, with fingerprints computed from the models.
pub struct Catalog {
    entries: Vec<(Fingerprint, CatalogLabel)>,
}

impl Catalog {
    /// Build the catalog. Tuple-group models need the two even-torsion cases.
    pub fn build() -> Result<Catalog> {
        let case4 = CaseConfig::builtin(4)?;
        let case5 = CaseConfig::builtin(5)?;
        let mut entries: Vec<(Fingerprint, CatalogLabel)> = Vec::new();
        let mut push = |fp: Fingerprint, order: usize, index: Option<u32>, name: &str| {
            entries.push((
                fp,
                CatalogLabel {
                    order,
                    index,
                    name: name.to_string(),
                },
            ));
        };

        push(fingerprint(&cyclic(1)), 1, Some(1), "{1}");
        push(fingerprint(&cyclic(2)), 2, Some(1), "Z_2");
        push(fingerprint(&cyclic(4)), 4, Some(1), "Z_4");
        push(fingerprint(&klein()), 4, Some(2), "Z_2^2");
        push(fingerprint(&cyclic(5)), 5, Some(1), "Z_5");
        // the only order-6 group arising is the full symmetric group H_3
        push(fingerprint(&dihedral(3)), 6, Some(1), "S_3");
        push(fingerprint(&cyclic(8)), 8, Some(1), "Z_8");
        push(
            fingerprint(&PermGroup::product(&cyclic(4), &cyclic(2))),
            8,
            Some(2),
            "Z_4 x Z_2",
        );
        push(fingerprint(&dihedral(4)), 8, Some(3), "D_8");
        push(fingerprint(&quaternion8()), 8, Some(4), "Q_8");
        push(
            fingerprint(&PermGroup::product(
                &PermGroup::product(&cyclic(2), &cyclic(2)),
                &cyclic(2),
            )),
            8,
            Some(5),
            "Z_2^3",
        );
        push(fingerprint(&cyclic(10)), 10, None, "Z_5 x Z_2");
        // the order-20 centralizer arising in the quotient is the dicyclic
        // group: Z_5 : Z_4 with the order-4 part acting through inversion
        push(fingerprint(&dicyclic(5)), 20, Some(1), "Z_5 : Z_4");
        push(fingerprint(&frobenius20()), 20, Some(3), "F_20");
        push(
            fingerprint(&PermGroup::product(&cyclic(4), &cyclic(4))),
            16,
            Some(2),
            "Z_4 x Z_4",
        );
        push(
            fingerprint(&PermGroup::product(&cyclic(5), &cyclic(5))),
            25,
            None,
            "Z_5^2",
        );
        push(
            fingerprint(&PermGroup::product(&cyclic(5), &dihedral(5))),
            50,
            None,
            "Z_5 x D_10",
        );

        // tuple-group models for the ids printed in the tables that have no
        // convenient independent permutation model
        {
            // (16,13): the automorphism group of the nu = 4 stratum T_1,
            // generated inside H_4/G
            let h4 = TupleGroup::new(&case4, ambient_group(&case4)?);
            let q4 = CosetGroup::quotient(&case4, &h4)?;
            let gens = [
                GroupElement::new(4, vec![0, 0, 1], 0),
                GroupElement::new(4, vec![1, 1, 0], 0),
                GroupElement::new(4, vec![0, 0, 0], 1),
            ];
            let sub = coset_subgroup(&q4, &gens)?;
            if sub.order() != 16 {
                return Err(GodeauxError::Internal(format!(
                    "T_1 model has order {}, expected 16",
                    sub.order()
                )));
            }
            push(fingerprint(&sub), 16, Some(13), "(Z_4 x Z_2) : Z_2");

            let fp = fingerprint(&q4);
            push(fp, 32, Some(11), "Z_4^2 : Z_2");
        }
        {
            let h5 = TupleGroup::new(&case5, ambient_group(&case5)?);
            let q5 = CosetGroup::quotient(&case5, &h5)?;
            push(fingerprint(&q5), 100, Some(10), "Z_5^2 : Z_4");
        }

        // the catalog must separate its own entries
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                if entries[i].0 == entries[j].0 {
                    return Err(GodeauxError::Internal(format!(
                        "catalog fingerprints collide: {} vs {}",
                        entries[i].1, entries[j].1
                    )));
                }
            }
        }
        Ok(Catalog { entries })
    }

    /// Match a group against the catalog.
    pub fn identify(&self, g: &dyn Group) -> Result<CatalogLabel> {
        let fp = fingerprint(g);
        let mut hit: Option<&CatalogLabel> = None;
        for (f, l) in &self.entries {
            if *f == fp {
                if hit.is_some() {
                    return Err(GodeauxError::AmbiguousMatch(g.order()));
                }
                hit = Some(l);
            }
        }
        hit.cloned().ok_or(GodeauxError::NoMatch(g.order()))
    }

    pub fn fingerprints(&self) -> &[(Fingerprint, CatalogLabel)] {
        &self.entries
    }
}

/// The subgroup of a coset group generated by the given tuples, exposed
/// through the Group trait.
pub struct CosetSubgroup<'a> {
    pub group: &'a CosetGroup<'a>,
    pub members: Vec<usize>,
    index: BTreeMap<usize, usize>,
}

pub fn coset_subgroup<'a>(
    group: &'a CosetGroup<'a>,
    gens: &[GroupElement],
) -> Result<CosetSubgroup<'a>> {
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(group.identity());
    let gen_idx: Vec<usize> = gens
        .iter()
        .map(|g| group.index_of(g))
        .collect::<Result<Vec<_>>>()?;
    let mut frontier: Vec<usize> = seen.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        for &g in &gen_idx {
            let y = group.mul(x, g);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    let members: Vec<usize> = seen.into_iter().collect();
    let index = members
        .iter()
        .copied()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    Ok(CosetSubgroup {
        group,
        members,
        index,
    })
}

impl<'a> Group for CosetSubgroup<'a> {
    fn order(&self) -> usize {
        self.members.len()
    }

    fn mul(&self, i: usize, j: usize) -> usize {
        let p = self.group.mul(self.members[i], self.members[j]);
        *self.index.get(&p).expect("closed")
    }

    fn identity(&self) -> usize {
        *self.index.get(&self.group.identity()).expect("identity")
    }

    fn label(&self, i: usize) -> String {
        self.group.label(self.members[i])
    }
}
