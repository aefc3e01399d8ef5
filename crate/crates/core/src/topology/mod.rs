//! Class groups, fundamental-group presentations and identification of links.

mod group;

use serde::Serialize;

use crate::convex::{homogenize_vertex, Cone};
use crate::error::{Error, Result};
use crate::exact::{extends_to_basis, IntMatrix};
use crate::pdivisor::PolyhedralDivisor;

pub use group::{abelianization, tietze_simplify, tietze_trivial, AbelianGroup, GroupPresentation, Triviality};

/// `Cl(X)` for a proper rank-2 polyhedral divisor.
///
/// Generators are the rays missing the degree and the pairs `(y, v)` of a
/// support point and a vertex; relations are `div(χ^u)` for a basis of `M`
/// and the linear equivalence of the fibres over the support points.
pub fn class_group(d: &PolyhedralDivisor) -> Result<AbelianGroup> {
    if !d.is_proper() {
        return Err(Error::NotProper);
    }
    let rays = d.rays_missing_degree();
    let vertices: Vec<(usize, Vec<i64>)> = d
        .support()
        .iter()
        .enumerate()
        .flat_map(|(i, (_, p))| p.vertices().iter().map(move |v| (i, homogenize_vertex(v))))
        .collect();
    let cols = rays.len() + vertices.len();
    let n = d.rank();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for j in 0..n {
        let mut row: Vec<i64> = rays.iter().map(|r| r[j]).collect();
        row.extend(vertices.iter().map(|(_, h)| h[j]));
        rows.push(row);
    }
    // fibre over y minus fibre over the first support point
    for y in 1..d.support().len() {
        let mut row = vec![0i64; rays.len()];
        row.extend(vertices.iter().map(|(i, h)| {
            let mu = h[n];
            if *i == y {
                mu
            } else if *i == 0 {
                -mu
            } else {
                0
            }
        }));
        rows.push(row);
    }
    Ok(AbelianGroup::from_relations(&IntMatrix::from_rows(cols, &rows)))
}

/// `Cl(X_σ) = Z^{rays} / M` for a full-dimensional toric cone.
pub fn class_group_toric(c: &Cone) -> Result<AbelianGroup> {
    if !c.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    let rays = c.rays();
    let rows: Vec<Vec<i64>> = (0..c.rank()).map(|j| rays.iter().map(|r| r[j]).collect()).collect();
    Ok(AbelianGroup::from_relations(&IntMatrix::from_rows(rays.len(), &rows)))
}

/// Presentation of `π₁` of the link on generators `b_y` (support points) and
/// `t₁, t₂` (a basis of `N`).
pub fn pi1_presentation(d: &PolyhedralDivisor) -> Result<GroupPresentation> {
    if !d.is_proper() {
        return Err(Error::NotProper);
    }
    let m = d.support().len();
    let mut generators: Vec<String> = d.support().iter().map(|(p, _)| format!("b_{}", p.label)).collect();
    generators.push("t1".into());
    generators.push("t2".into());
    let (t1, t2) = (m, m + 1);
    let t_word = |a: i64, b: i64| {
        let mut w = GroupPresentation::power(t1, a);
        w.extend(GroupPresentation::power(t2, b));
        w
    };

    let mut relators = vec![(0..m).map(|y| y as i64 + 1).collect::<Vec<_>>()];
    for y in 0..m {
        relators.push(GroupPresentation::commutator(y, t1));
        relators.push(GroupPresentation::commutator(y, t2));
    }
    relators.push(GroupPresentation::commutator(t1, t2));
    for r in d.tail().rays() {
        relators.push(t_word(r[0], r[1]));
    }
    for (y, (_, p)) in d.support().iter().enumerate() {
        for v in p.vertices() {
            let h = homogenize_vertex(v);
            let mut w = t_word(h[0], h[1]);
            w.extend(GroupPresentation::power(y, h[2]));
            relators.push(w);
        }
    }
    GroupPresentation::new(generators, relators)
}

/// Whether the relator pattern above is known to apply: at most two
/// support points carry non-integral vertices.
pub fn pi1_pattern_supported(d: &PolyhedralDivisor) -> bool {
    d.support().iter().filter(|(_, p)| !p.is_integral()).count() <= 2
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkReport {
    /// `H²(L, Z) ≅ Cl(X)`.
    pub h2: AbelianGroup,
    pub pi1_abelianization: AbelianGroup,
    pub pi1: Triviality,
    pub pattern_supported: bool,
    /// Smale–Barden name, when the link is certified simply connected with free `H²`.
    pub manifold: Option<String>,
    /// Whether a positive K-stability verdict accompanies the identification.
    pub sasaki_einstein: bool,
    pub notes: Vec<String>,
}

/// `S⁵` for rank 0, otherwise `k(S²×S³)`.
pub fn smale_barden_name(k: usize) -> String {
    match k {
        0 => "S⁵".into(),
        1 => "S²×S³".into(),
        k => format!("{k}(S²×S³)"),
    }
}

/// Topology of the link of an isolated complexity-one singularity.
/// `kstable` carries the K-stability verdict, when one has been computed.
pub fn link_report(d: &PolyhedralDivisor, kstable: Option<bool>) -> Result<LinkReport> {
    let iso = d.is_isolated()?;
    if !iso.isolated {
        return Err(Error::Precondition(format!(
            "singularity is not isolated (condition {} fails)",
            iso.failed_condition.map_or("?".to_string(), |c| c.to_string())
        )));
    }
    let h2 = class_group(d)?;
    let p = pi1_presentation(d)?;
    let pattern_supported = pi1_pattern_supported(d);
    let pi1 = if pattern_supported { tietze_trivial(&p) } else { Triviality::Unknown };
    let mut notes = vec!["relators for rays meeting the degree follow the worked family".to_string()];
    if !pattern_supported {
        notes.push("more than two support points with non-integral vertices: π₁ not certified".into());
    }
    Ok(finish(h2, abelianization(&p), pi1, pattern_supported, kstable, notes))
}

/// The same report for a rank-3 toric cone, whose link has `π₁ = N / ⟨rays⟩`.
pub fn link_report_toric(c: &Cone, kstable: Option<bool>) -> Result<LinkReport> {
    if c.rank() != 3 || !c.is_full_dimensional() || !c.is_pointed() {
        return Err(Error::Precondition("toric links need a pointed full-dimensional cone of rank 3".into()));
    }
    if !c.facet_ray_sets().iter().all(|f| f.len() == 2 && extends_to_basis(f, 3)) {
        return Err(Error::Precondition("singularity is not isolated (a 2-face is not smooth)".into()));
    }
    let h2 = class_group_toric(c)?;
    let rays = c.rays();
    let ray_matrix: Vec<Vec<i64>> = rays.to_vec();
    let pi1_ab = AbelianGroup::from_relations(&IntMatrix::from_rows(3, &ray_matrix));
    let pi1 = if pi1_ab.is_trivial() { Triviality::CertifiedTrivial } else { Triviality::Unknown };
    Ok(finish(h2, pi1_ab, pi1, true, kstable, vec!["π₁ of a toric link is N modulo the rays".into()]))
}

fn finish(
    h2: AbelianGroup,
    pi1_abelianization: AbelianGroup,
    pi1: Triviality,
    pattern_supported: bool,
    kstable: Option<bool>,
    mut notes: Vec<String>,
) -> LinkReport {
    let manifold = (pi1 == Triviality::CertifiedTrivial && h2.is_free()).then(|| smale_barden_name(h2.free_rank));
    let sasaki_einstein = manifold.is_some() && kstable == Some(true);
    if manifold.is_none() {
        notes.push("identification withheld".into());
    } else if !sasaki_einstein {
        notes.push("topology only; no Sasaki-Einstein claim".into());
    }
    LinkReport { h2, pi1_abelianization, pi1, pattern_supported, manifold, sasaki_einstein, notes }
}
