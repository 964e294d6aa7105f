//! Named groups.
//!
//! Catalog ids:
//!
//! | id | group |
//! |----|-------|
//! | `cyclic:n` | Z_n |
//! | `dihedral:n` | dihedral group of order n |
//! | `elemabelian:p:m` | (Z_p)^m |
//! | `abelian:n1,n2,...` | Z_n1 x Z_n2 x ... |
//! | `symmetric:n`, `alternating:n` | S_n, A_n for n <= 7 |
//! | `quaternion:8` | Q_8 |
//! | `paper16` | <a,b,c : a^4=b^2=c^2=1, [a,b]=[c,b]=1, a^c=ab> |
//! | `psl2:q` | PSL(2,q), q in {4,5,7,8,9,11,13,23} |
//!
//! PSL(2,q) acts on the projective line with points `0..q-1` (field
//! elements by encoding) and `q` for infinity. Its generators, in order, are
//! `x -> x+1`, `x -> w^2 x` with `w` the primitive element of smallest
//! encoding, and `x -> -1/x`.

pub mod field;

use crate::error::{Error, Result};
use crate::group::{BackendKind, FiniteGroup};
use crate::limits::Caps;
use crate::perm::Permutation;

pub use field::{FieldElement, GaloisField};

/// Values of q for which `psl2:q` is built.
pub const PSL2_QS: &[usize] = &[4, 5, 7, 8, 9, 11, 13, 23];

/// Something deliberately not computed, with the reason.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ScaleDeclaration {
    pub subject: String,
    pub status: &'static str,
    pub reason: String,
}

/// Everything the tool declines to compute at desk scale.
pub fn out_of_scale_declarations() -> Vec<ScaleDeclaration> {
    let mk = |s: &str, r: &str| ScaleDeclaration {
        subject: s.to_string(),
        status: "out of desk scale",
        reason: r.to_string(),
    };
    vec![
        mk(
            "exceptional groups of Lie type (G2(q), F4(q), 3D4(q), 2G2(q), ...)",
            "orders far exceed exhaustive search; only the factorization filter logic is exercised, on small groups",
        ),
        mk(
            "psp6:2",
            "order 1451520; the underlying index-two construction is checked on searched small instances instead",
        ),
        mk(
            "psl2:59",
            "order 102660 exceeds the full-verification budget; its two classes are not reproduced",
        ),
    ]
}

fn out_of_scale(id: &str) -> Option<Error> {
    let lower = id.to_ascii_lowercase();
    let exceptional = ["g2:", "f4:", "3d4:", "2g2:", "2b2:", "2f4:", "e6:", "2e6:", "e7:", "e8:"];
    if exceptional.iter().any(|p| lower.starts_with(p)) {
        return Some(Error::OutOfDeskScale(
            id.to_string(),
            "exceptional groups of Lie type are not constructed".into(),
        ));
    }
    if lower.starts_with("psp6:") {
        return Some(Error::OutOfDeskScale(
            id.to_string(),
            "order 1451520 is beyond exhaustive verification".into(),
        ));
    }
    if lower == "psl2:59" {
        return Some(Error::OutOfDeskScale(
            id.to_string(),
            "order 102660 exceeds the full-verification budget".into(),
        ));
    }
    None
}

pub fn named_group(id: &str) -> Result<FiniteGroup> {
    named_group_with(id, BackendKind::Auto, &Caps::default())
}

fn parse_usize(s: &str, id: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::UnknownGroup(id.to_string()))
}

/// Build a catalog group. `kind` only affects permutation-built families.
pub fn named_group_with(id: &str, kind: BackendKind, caps: &Caps) -> Result<FiniteGroup> {
    if let Some(e) = out_of_scale(id) {
        return Err(e);
    }
    let (family, arg) = id.split_once(':').unwrap_or((id, ""));
    let group = match family {
        "cyclic" => {
            let n = parse_usize(arg, id)?;
            if n == 0 {
                return Err(Error::UnknownGroup(id.to_string()));
            }
            let cycle: Vec<usize> = (0..n).collect();
            let gen = Permutation::from_cycles(n, &[&cycle])?;
            FiniteGroup::from_permutations(&[gen], kind, caps)?
        }
        "dihedral" => dihedral(parse_usize(arg, id)?, kind, caps, id)?,
        "elemabelian" => {
            let (p, m) = arg.split_once(':').ok_or_else(|| Error::UnknownGroup(id.into()))?;
            let p = parse_usize(p, id)?;
            let m = parse_usize(m, id)?;
            abelian(&vec![p; m], caps)?
        }
        "abelian" => {
            let factors = arg
                .split(',')
                .map(|s| parse_usize(s, id))
                .collect::<Result<Vec<_>>>()?;
            abelian(&factors, caps)?
        }
        "symmetric" => symmetric(parse_usize(arg, id)?, kind, caps, id)?,
        "alternating" => alternating(parse_usize(arg, id)?, kind, caps, id)?,
        "quaternion" if arg == "8" => quaternion8()?,
        "paper16" if arg.is_empty() => paper16()?,
        "psl2" => {
            let q = parse_usize(arg, id)?;
            if !PSL2_QS.contains(&q) {
                return Err(Error::UnknownGroup(format!("{id} (supported q: {PSL2_QS:?})")));
            }
            psl2(q, kind, caps)?
        }
        _ => return Err(Error::UnknownGroup(id.to_string())),
    };
    Ok(group.with_label(id))
}

fn dihedral(n: usize, kind: BackendKind, caps: &Caps, id: &str) -> Result<FiniteGroup> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::UnknownGroup(id.to_string()));
    }
    let m = n / 2;
    if m < 3 {
        // D_2 = Z_2, D_4 = Z_2 x Z_2
        return if m == 1 { abelian(&[2], caps) } else { abelian(&[2, 2], caps) };
    }
    let rot: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
    let refl: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
    FiniteGroup::from_permutations(
        &[Permutation::from_images(&rot)?, Permutation::from_images(&refl)?],
        kind,
        caps,
    )
}

fn symmetric(n: usize, kind: BackendKind, caps: &Caps, id: &str) -> Result<FiniteGroup> {
    if n == 0 || n > 7 {
        return Err(Error::UnknownGroup(id.to_string()));
    }
    if n == 1 {
        return FiniteGroup::from_permutations(&[Permutation::identity(1)], kind, caps);
    }
    let cycle: Vec<usize> = (0..n).collect();
    let gens = [
        Permutation::from_cycles(n, &[&cycle])?,
        Permutation::from_cycles(n, &[&[0, 1]])?,
    ];
    FiniteGroup::from_permutations(&gens, kind, caps)
}

fn alternating(n: usize, kind: BackendKind, caps: &Caps, id: &str) -> Result<FiniteGroup> {
    if n == 0 || n > 7 {
        return Err(Error::UnknownGroup(id.to_string()));
    }
    if n < 3 {
        return FiniteGroup::from_permutations(&[Permutation::identity(n)], kind, caps);
    }
    let mut gens = vec![Permutation::from_cycles(n, &[&[0, 1, 2]])?];
    if n > 3 {
        let long: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
        gens.push(Permutation::from_cycles(n, &[&long])?);
    }
    FiniteGroup::from_permutations(&gens, kind, caps)
}

/// Direct product of cyclic groups on coordinate tuples.
fn abelian(factors: &[usize], caps: &Caps) -> Result<FiniteGroup> {
    if factors.is_empty() || factors.contains(&0) {
        return Err(Error::UnknownGroup(format!("abelian:{factors:?}")));
    }
    let identity = vec![0usize; factors.len()];
    let gens: Vec<Vec<usize>> = (0..factors.len())
        .filter(|&i| factors[i] > 1)
        .map(|i| {
            let mut v = identity.clone();
            v[i] = 1;
            v
        })
        .collect();
    let (g, _) = FiniteGroup::from_generators(
        identity,
        &gens,
        |a, b| a.iter().zip(b).zip(factors).map(|((x, y), n)| (x + y) % n).collect(),
        caps.dense_order,
    )?;
    Ok(g)
}

fn quaternion8() -> Result<FiniteGroup> {
    // i^a j^b with i^4 = 1, j^2 = i^2, j i = i^{-1} j
    let mul = |x: &(u8, u8), y: &(u8, u8)| {
        let sign_twist = if x.1 == 1 { (4 - y.0) % 4 } else { y.0 };
        let extra = if x.1 == 1 && y.1 == 1 { 2 } else { 0 };
        ((x.0 + sign_twist + extra) % 4, (x.1 + y.1) % 2)
    };
    let (g, _) = FiniteGroup::from_generators((0u8, 0u8), &[(1, 0), (0, 1)], mul, 8)?;
    Ok(g)
}

/// Normal form `a^i b^j c^k` of the order-16 group; `c a = a b c`.
pub(crate) fn paper16_law(x: &(u8, u8, u8), y: &(u8, u8, u8)) -> (u8, u8, u8) {
    ((x.0 + y.0) % 4, (x.1 + y.1 + x.2 * y.0) % 2, (x.2 + y.2) % 2)
}

/// The order-16 group with generators a, b, c (in that order) and its normal forms.
pub fn paper16_with_normal_forms() -> Result<(FiniteGroup, Vec<(u8, u8, u8)>)> {
    let gens = [(1, 0, 0), (0, 1, 0), (0, 0, 1)];
    let (g, forms) = FiniteGroup::from_generators((0u8, 0u8, 0u8), &gens, paper16_law, 16)?;
    Ok((g, forms))
}

fn paper16() -> Result<FiniteGroup> {
    Ok(paper16_with_normal_forms()?.0)
}

/// Order of PSL(2,q).
pub fn psl2_order(q: usize) -> usize {
    let g = if q.is_multiple_of(2) { 1 } else { 2 };
    q * (q * q - 1) / g
}

fn field_for(q: usize) -> Result<GaloisField> {
    for &(p, m) in field::SUPPORTED {
        if p.pow(m as u32) == q {
            return GaloisField::new(p, m);
        }
    }
    Err(Error::InvalidInput(format!("no field of order {q} in the catalog")))
}

/// The three generating permutations of PSL(2,q) on the projective line.
pub fn psl2_generators(q: usize) -> Result<Vec<Permutation>> {
    let f = field_for(q)?;
    let inf = q;
    let k = f.mul(f.primitive(), f.primitive());
    let mut translate = vec![0usize; q + 1];
    let mut scale = vec![0usize; q + 1];
    let mut invert = vec![0usize; q + 1];
    for x in f.elements() {
        translate[x.index()] = f.add(x, FieldElement::ONE).index();
        scale[x.index()] = f.mul(k, x).index();
        invert[x.index()] = match f.inv(x) {
            Some(xi) => f.neg(xi).index(),
            None => inf,
        };
    }
    translate[inf] = inf;
    scale[inf] = inf;
    invert[inf] = 0;
    Ok(vec![
        Permutation::from_images(&translate)?,
        Permutation::from_images(&scale)?,
        Permutation::from_images(&invert)?,
    ])
}

fn psl2(q: usize, kind: BackendKind, caps: &Caps) -> Result<FiniteGroup> {
    let gens = psl2_generators(q)?;
    let g = FiniteGroup::from_permutations(&gens, kind, caps)?;
    let expected = psl2_order(q);
    if g.order() != expected {
        return Err(Error::InvalidGroup(format!(
            "psl2:{q} generated {} elements, expected {expected}",
            g.order()
        )));
    }
    Ok(g)
}
