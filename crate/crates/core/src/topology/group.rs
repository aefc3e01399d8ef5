use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{smith_normal_form, IntMatrix};

/// `Z^free_rank ⊕ Z/t₁ ⊕ … ⊕ Z/t_m` with `t₁ | t₂ | …`, all `t_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    /// Cokernel of the relation matrix (one row per relation, one column per generator).
    pub fn from_relations(relations: &IntMatrix) -> Self {
        let snf = smith_normal_form(relations);
        let factors = snf.invariant_factors();
        let torsion = factors
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| d.magnitude().to_u64().expect("torsion coefficient exceeds u64"))
            .collect();
        AbelianGroup { free_rank: relations.cols() - factors.len(), torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A finite presentation. Letters are signed 1-based generator indices:
/// `i` is the `i`-th generator and `-i` its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Triviality {
    #[serde(rename = "certified-trivial")]
    CertifiedTrivial,
    #[serde(rename = "unknown")]
    Unknown,
}

impl Triviality {
    pub fn as_str(&self) -> &'static str {
        match self {
            Triviality::CertifiedTrivial => "certified-trivial",
            Triviality::Unknown => "unknown",
        }
    }
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Vec<i64>>) -> Result<Self> {
        let n = generators.len() as i64;
        if let Some(bad) = relators.iter().flatten().find(|&&l| l == 0 || l.abs() > n) {
            return Err(Error::Precondition(format!("letter {bad} names no generator")));
        }
        Ok(GroupPresentation { generators, relators })
    }

    /// `g^e` as a word.
    pub fn power(generator: usize, e: i64) -> Vec<i64> {
        let letter = generator as i64 + 1;
        vec![if e >= 0 { letter } else { -letter }; e.unsigned_abs() as usize]
    }

    pub fn commutator(a: usize, b: usize) -> Vec<i64> {
        let (a, b) = (a as i64 + 1, b as i64 + 1);
        vec![a, b, -a, -b]
    }

    pub fn word_string(&self, word: &[i64]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        let mut out = Vec::new();
        let mut i = 0;
        while i < word.len() {
            let mut j = i;
            while j < word.len() && word[j] == word[i] {
                j += 1;
            }
            let name = &self.generators[(word[i].unsigned_abs() - 1) as usize];
            let e = (j - i) as i64 * word[i].signum();
            out.push(if e == 1 { name.clone() } else { format!("{name}^{e}") });
            i = j;
        }
        out.join(" ")
    }

    pub fn relator_strings(&self) -> Vec<String> {
        self.relators.iter().map(|w| self.word_string(w)).collect()
    }
}

/// Exponent-sum matrix, then Smith normal form.
pub fn abelianization(p: &GroupPresentation) -> AbelianGroup {
    let n = p.generators.len();
    let rows: Vec<Vec<i64>> = p
        .relators
        .iter()
        .map(|w| {
            let mut row = vec![0i64; n];
            for &l in w {
                row[(l.unsigned_abs() - 1) as usize] += l.signum();
            }
            row
        })
        .collect();
    AbelianGroup::from_relations(&IntMatrix::from_rows(n, &rows))
}

fn free_reduce(w: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn cyclic_reduce(w: &[i64]) -> Vec<i64> {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w = w[1..w.len() - 1].to_vec();
    }
    w
}

/// `Some((g, e))` when `w = g^e` for a single generator.
fn as_power(w: &[i64]) -> Option<(i64, i64)> {
    let first = *w.first()?;
    w.iter().all(|&l| l == first).then(|| (first.abs(), w.len() as i64 * first.signum()))
}

fn substitute(w: &[i64], g: i64, replacement: &[i64]) -> Vec<i64> {
    let mut out = Vec::new();
    for &l in w {
        if l == g {
            out.extend_from_slice(replacement);
        } else if l == -g {
            out.extend(replacement.iter().rev().map(|x| -x));
        } else {
            out.push(l);
        }
    }
    out
}

/// Greedy Tietze simplification.
///
/// Generators killed by a one-letter relator are deleted, a relator `x y^{±1}`
/// eliminates `x`, and relators `g^a`, `g^b` are merged into `g^gcd(a,b)`.
/// Returns the remaining generators and relators.
pub fn tietze_simplify(p: &GroupPresentation) -> GroupPresentation {
    let n = p.generators.len();
    let mut alive = vec![true; n];
    let mut rels: Vec<Vec<i64>> = p.relators.iter().map(|w| cyclic_reduce(w)).collect();
    loop {
        rels.retain(|w| !w.is_empty());
        rels.sort();
        rels.dedup();
        let mut changed = false;

        // merge pure powers of the same generator
        let mut powers: BTreeMap<i64, i64> = BTreeMap::new();
        rels.retain(|w| match as_power(w) {
            Some((g, e)) => {
                let entry = powers.entry(g).or_insert(0);
                *entry = entry.gcd(&e);
                false
            }
            None => true,
        });
        for (&g, &e) in &powers {
            rels.push(vec![g; e as usize]);
        }

        if let Some(w) = rels.iter().find(|w| w.len() == 1) {
            let g = w[0].abs();
            alive[(g - 1) as usize] = false;
            rels = rels.iter().map(|r| cyclic_reduce(&r.iter().copied().filter(|l| l.abs() != g).collect::<Vec<_>>())).collect();
            changed = true;
        } else if let Some(w) = rels.iter().find(|w| w.len() == 2 && w[0].abs() != w[1].abs()).cloned() {
            // w[0] w[1] = 1, so w[0] = w[1]^{-1}
            let (x, y) = (w[0], w[1]);
            let (g, replacement) = if x > 0 { (x, vec![-y]) } else { (-x, vec![y]) };
            alive[(g - 1) as usize] = false;
            rels = rels.iter().map(|r| cyclic_reduce(&substitute(r, g, &replacement))).collect();
            changed = true;
        }
        if !changed {
            break;
        }
    }
    // renumber the surviving generators
    let mut index = vec![0i64; n];
    let mut generators = Vec::new();
    for (i, name) in p.generators.iter().enumerate() {
        if alive[i] {
            generators.push(name.clone());
            index[i] = generators.len() as i64;
        }
    }
    let relators = rels
        .iter()
        .map(|w| w.iter().map(|&l| index[(l.unsigned_abs() - 1) as usize] * l.signum()).collect())
        .collect();
    GroupPresentation { generators, relators }
}

/// One-sided triviality test: never claims a group is nontrivial.
pub fn tietze_trivial(p: &GroupPresentation) -> Triviality {
    if tietze_simplify(p).generators.is_empty() {
        Triviality::CertifiedTrivial
    } else {
        Triviality::Unknown
    }
}
