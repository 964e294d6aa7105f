//! Finite groups with canonical element indices.
//!
//! Every group stores its elements as indices `0..n` with the identity at
//! index 0. Small groups keep a dense multiplication table; large
//! permutation groups multiply by composition and look the result up in a
//! hash index. Element numbering is fixed at construction (breadth-first
//! from the generators, in generator order), so every downstream report is
//! deterministic.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Caps;
use crate::perm::Permutation;

/// Index of a group element; index 0 is always the identity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(u32);

impl Element {
    pub const IDENTITY: Element = Element(0);

    #[inline]
    pub fn new(index: usize) -> Self {
        Element(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Requested storage for a permutation-generated group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    /// Dense table up to `Caps::dense_order`, permutations above.
    Auto,
    Dense,
    Permutation,
}

enum Backend {
    Dense(Vec<u16>),
    Permutation(HashMap<Permutation, u32>),
}

/// Conjugacy classes, sorted by (size, least member).
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    class_of: Vec<u32>,
    classes: Vec<Vec<Element>>,
}

impl ConjugacyClasses {
    pub fn class_of(&self, g: Element) -> usize {
        self.class_of[g.index()] as usize
    }

    pub fn classes(&self) -> &[Vec<Element>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn size_of_class_of(&self, g: Element) -> usize {
        self.classes[self.class_of(g)].len()
    }
}

/// A finite group on the index set `0..n`.
pub struct FiniteGroup {
    n: usize,
    backend: Backend,
    inverses: Vec<Element>,
    generators: Vec<Element>,
    perms: Option<Vec<Permutation>>,
    label: Option<String>,
    orders: OnceLock<Vec<u32>>,
    classes: OnceLock<ConjugacyClasses>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.n)
            .field("label", &self.label)
            .field("dense", &self.is_dense())
            .field("generators", &self.generators)
            .finish()
    }
}

/// Breadth-first enumeration from a generator list.
struct Enumeration<T> {
    elements: Vec<T>,
    index: HashMap<T, u32>,
    /// `right[s][x]` is the index of `x * gens[s]`.
    right: Vec<Vec<u32>>,
    /// For `y > 0`: `y = parent.0 * gens[parent.1]`.
    parent: Vec<(u32, u16)>,
}

fn enumerate<T, F>(identity: T, gens: &[T], mul: F, max_order: usize) -> Result<Enumeration<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity, 0u32);
    let mut right = vec![Vec::new(); gens.len()];
    let mut parent = vec![(0u32, 0u16)];
    let mut i = 0;
    while i < elements.len() {
        for (s, gen) in gens.iter().enumerate() {
            let y = mul(&elements[i], gen);
            let idx = match index.get(&y) {
                Some(&idx) => idx,
                None => {
                    let idx = elements.len() as u32;
                    if elements.len() >= max_order {
                        return Err(Error::cap("group order", elements.len() + 1, max_order));
                    }
                    index.insert(y.clone(), idx);
                    elements.push(y);
                    parent.push((i as u32, s as u16));
                    idx
                }
            };
            right[s].push(idx);
        }
        i += 1;
    }
    Ok(Enumeration { elements, index, right, parent })
}

fn dense_from_enumeration<T>(e: &Enumeration<T>) -> Vec<u16> {
    let n = e.elements.len();
    let mut table = vec![0u16; n * n];
    for x in 0..n {
        let row = &mut table[x * n..(x + 1) * n];
        row[0] = x as u16;
        for y in 1..n {
            let (p, s) = e.parent[y];
            row[y] = e.right[s as usize][row[p as usize] as usize] as u16;
        }
    }
    table
}

fn inverses_from_table(n: usize, table: &[u16]) -> Result<Vec<Element>> {
    let mut inv = vec![Element::IDENTITY; n];
    for x in 0..n {
        let row = &table[x * n..(x + 1) * n];
        let y = row
            .iter()
            .position(|&v| v == 0)
            .ok_or_else(|| Error::InvalidGroup(format!("element {x} has no right inverse")))?;
        inv[x] = Element::new(y);
    }
    Ok(inv)
}

impl FiniteGroup {
    /// Enumerate the group generated by `gens` under `mul` and store it densely.
    ///
    /// Returns the group and the enumerated elements in index order.
    pub fn from_generators<T, F>(
        identity: T,
        gens: &[T],
        mul: F,
        max_order: usize,
    ) -> Result<(FiniteGroup, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        if max_order > u16::MAX as usize + 1 {
            return Err(Error::cap("dense group order", max_order, u16::MAX as usize + 1));
        }
        let e = enumerate(identity, gens, mul, max_order)?;
        let n = e.elements.len();
        let table = dense_from_enumeration(&e);
        let inverses = inverses_from_table(n, &table)?;
        let mut generators: Vec<Element> = Vec::new();
        for g in gens {
            let idx = Element::new(e.index[g] as usize);
            if !idx.is_identity() && !generators.contains(&idx) {
                generators.push(idx);
            }
        }
        let group = FiniteGroup {
            n,
            backend: Backend::Dense(table),
            inverses,
            generators,
            perms: None,
            label: None,
            orders: OnceLock::new(),
            classes: OnceLock::new(),
        };
        Ok((group, e.elements))
    }

    /// Enumerate a permutation group; the permutations are kept alongside.
    pub fn from_permutations(
        gens: &[Permutation],
        kind: BackendKind,
        caps: &Caps,
    ) -> Result<FiniteGroup> {
        let degree = gens.first().map(Permutation::degree).unwrap_or(1);
        if gens.iter().any(|p| p.degree() != degree) {
            return Err(Error::InvalidGroup("generators of different degree".into()));
        }
        let identity = Permutation::identity(degree);
        let e = enumerate(identity, gens, |a, b| a.then(b), caps.max_group_order)?;
        let n = e.elements.len();
        let dense = match kind {
            BackendKind::Dense => true,
            BackendKind::Permutation => false,
            BackendKind::Auto => n <= caps.dense_order,
        };
        if dense && n > u16::MAX as usize + 1 {
            return Err(Error::cap("dense group order", n, u16::MAX as usize + 1));
        }
        let mut generators: Vec<Element> = Vec::new();
        for g in gens {
            let idx = Element::new(e.index[g] as usize);
            if !idx.is_identity() && !generators.contains(&idx) {
                generators.push(idx);
            }
        }
        let (backend, inverses) = if dense {
            let table = dense_from_enumeration(&e);
            let inverses = inverses_from_table(n, &table)?;
            (Backend::Dense(table), inverses)
        } else {
            let inverses = e
                .elements
                .iter()
                .map(|p| Element::new(e.index[&p.inverse()] as usize))
                .collect();
            (Backend::Permutation(e.index), inverses)
        };
        Ok(FiniteGroup {
            n,
            backend,
            inverses,
            generators,
            perms: Some(e.elements),
            label: None,
            orders: OnceLock::new(),
            classes: OnceLock::new(),
        })
    }

    /// Build from a Cayley table (row `g`, column `h` holds `g*h`; identity at 0).
    ///
    /// Checks the Latin-square property, the identity row and column, and
    /// associativity (exhaustively for n <= 64, on 1000 seeded triples above).
    pub fn from_cayley_table(rows: &[Vec<usize>]) -> Result<FiniteGroup> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty Cayley table".into()));
        }
        if n > u16::MAX as usize + 1 {
            return Err(Error::cap("dense group order", n, u16::MAX as usize + 1));
        }
        let mut table = Vec::with_capacity(n * n);
        for (g, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {g} has length {}", row.len())));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v, order: n });
                }
                table.push(v as u16);
            }
        }
        Self::from_flat_table(n, table)
    }

    /// As [`FiniteGroup::from_cayley_table`] on a row-major table.
    pub fn from_flat_table(n: usize, table: Vec<u16>) -> Result<FiniteGroup> {
        if table.len() != n * n || table.iter().any(|&v| v as usize >= n) {
            return Err(Error::InvalidGroup(format!("table is not {n} x {n} over 0..{n}")));
        }
        let mut group = Self::from_table_unchecked(n, table, Vec::new())?;
        group.check_axioms()?;
        group.generators = crate::subgroup::greedy_generators(&group, group.elements());
        Ok(group)
    }

    /// Dense group from a raw table; computes inverses but checks nothing else.
    pub(crate) fn from_table_unchecked(
        n: usize,
        table: Vec<u16>,
        generators: Vec<Element>,
    ) -> Result<FiniteGroup> {
        let inverses = inverses_from_table(n, &table)?;
        Ok(FiniteGroup {
            n,
            backend: Backend::Dense(table),
            inverses,
            generators,
            perms: None,
            label: None,
            orders: OnceLock::new(),
            classes: OnceLock::new(),
        })
    }

    /// Dense group from a closure-computed table, filling in generators.
    pub(crate) fn from_table_with_generators(n: usize, table: Vec<u16>) -> Result<FiniteGroup> {
        let mut g = Self::from_table_unchecked(n, table, Vec::new())?;
        g.generators = crate::subgroup::greedy_generators(&g, g.elements());
        Ok(g)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.backend, Backend::Dense(_))
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Element> + ExactSizeIterator + Clone {
        (0..self.n).map(Element::new)
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// Permutation images of every element, when the group was built from permutations.
    pub fn permutations(&self) -> Option<&[Permutation]> {
        self.perms.as_deref()
    }

    pub fn element(&self, index: usize) -> Result<Element> {
        if index < self.n {
            Ok(Element::new(index))
        } else {
            Err(Error::IndexOutOfRange { index, order: self.n })
        }
    }

    #[inline]
    pub fn mul(&self, g: Element, h: Element) -> Element {
        match &self.backend {
            Backend::Dense(t) => Element(t[g.index() * self.n + h.index()] as u32),
            Backend::Permutation(index) => {
                let perms = self.perms.as_ref().expect("permutation backend keeps permutations");
                let p = perms[g.index()].then(&perms[h.index()]);
                Element(index[&p])
            }
        }
    }

    pub fn try_mul(&self, g: Element, h: Element) -> Result<Element> {
        self.element(g.index())?;
        self.element(h.index())?;
        Ok(self.mul(g, h))
    }

    #[inline]
    pub fn inv(&self, g: Element) -> Element {
        self.inverses[g.index()]
    }

    pub fn mul3(&self, a: Element, b: Element, c: Element) -> Element {
        self.mul(self.mul(a, b), c)
    }

    pub fn pow(&self, g: Element, k: i64) -> Element {
        let base = if k < 0 { self.inv(g) } else { g };
        let mut e = k.unsigned_abs();
        let mut acc = Element::IDENTITY;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    /// `g^x = x^{-1} g x`.
    #[inline]
    pub fn conjugate(&self, g: Element, x: Element) -> Element {
        self.mul(self.mul(self.inv(x), g), x)
    }

    /// `[g, h] = g^{-1} g^h`.
    pub fn commutator(&self, g: Element, h: Element) -> Element {
        self.mul(self.inv(g), self.conjugate(g, h))
    }

    pub fn element_orders(&self) -> &[u32] {
        self.orders.get_or_init(|| {
            self.elements()
                .map(|g| {
                    let mut k = 1u32;
                    let mut x = g;
                    while !x.is_identity() {
                        x = self.mul(x, g);
                        k += 1;
                    }
                    k
                })
                .collect()
        })
    }

    pub fn order_of(&self, g: Element) -> usize {
        self.element_orders()[g.index()] as usize
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| {
            let gens = self.generators();
            let mut class_of = vec![u32::MAX; self.n];
            let mut classes: Vec<Vec<Element>> = Vec::new();
            for start in self.elements() {
                if class_of[start.index()] != u32::MAX {
                    continue;
                }
                let id = classes.len() as u32;
                let mut members = vec![start];
                class_of[start.index()] = id;
                let mut i = 0;
                while i < members.len() {
                    let x = members[i];
                    for &s in gens {
                        let y = self.conjugate(x, s);
                        if class_of[y.index()] == u32::MAX {
                            class_of[y.index()] = id;
                            members.push(y);
                        }
                    }
                    i += 1;
                }
                members.sort_unstable();
                classes.push(members);
            }
            let mut order: Vec<usize> = (0..classes.len()).collect();
            order.sort_by_key(|&c| (classes[c].len(), classes[c][0]));
            let mut remap = vec![0u32; classes.len()];
            for (new, &old) in order.iter().enumerate() {
                remap[old] = new as u32;
            }
            let classes: Vec<Vec<Element>> =
                order.iter().map(|&c| std::mem::take(&mut classes[c])).collect();
            for c in class_of.iter_mut() {
                *c = remap[*c as usize];
            }
            ConjugacyClasses { class_of, classes }
        })
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest prime dividing the order (1 for the trivial group).
    pub fn smallest_prime_divisor(&self) -> usize {
        (2..=self.n).find(|p| self.n.is_multiple_of(*p)).unwrap_or(1)
    }

    /// Group axioms: Latin square (dense), two-sided identity and inverses,
    /// associativity (full for n <= 64, 1000 seeded triples above).
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.n;
        if let Backend::Dense(t) = &self.backend {
            let mut seen = vec![0u32; n];
            for g in 0..n {
                let stamp = g as u32 + 1;
                for h in 0..n {
                    let v = t[g * n + h] as usize;
                    if seen[v] == stamp {
                        return Err(Error::InvalidGroup(format!("row {g} repeats {v}")));
                    }
                    seen[v] = stamp;
                }
            }
            seen.iter_mut().for_each(|s| *s = 0);
            for h in 0..n {
                let stamp = h as u32 + 1;
                for g in 0..n {
                    let v = t[g * n + h] as usize;
                    if seen[v] == stamp {
                        return Err(Error::InvalidGroup(format!("column {h} repeats {v}")));
                    }
                    seen[v] = stamp;
                }
            }
        }
        for g in self.elements() {
            if self.mul(Element::IDENTITY, g) != g || self.mul(g, Element::IDENTITY) != g {
                return Err(Error::InvalidGroup(format!("index 0 is not an identity at {g}")));
            }
            let gi = self.inv(g);
            if !self.mul(g, gi).is_identity() || !self.mul(gi, g).is_identity() {
                return Err(Error::InvalidGroup(format!("bad inverse for {g}")));
            }
        }
        self.check_associativity(0x5eed)
    }

    pub fn check_associativity(&self, seed: u64) -> Result<()> {
        let n = self.n;
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            let (a, b, c) = (Element::new(a), Element::new(b), Element::new(c));
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Err(Error::InvalidGroup(format!("associativity fails at ({a}, {b}, {c})")))
            } else {
                Ok(())
            }
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..1000 {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    /// The multiplication table as nested rows (for serialization).
    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        self.elements()
            .map(|g| self.elements().map(|h| self.mul(g, h).index()).collect())
            .collect()
    }
}

/// The direct product `left x right` with pair encoding `a * |right| + b`.
#[derive(Clone, Copy, Debug)]
pub struct ProductGroup<'a> {
    left: &'a FiniteGroup,
    right: &'a FiniteGroup,
}

impl<'a> ProductGroup<'a> {
    pub fn new(left: &'a FiniteGroup, right: &'a FiniteGroup) -> Self {
        ProductGroup { left, right }
    }

    pub fn left(&self) -> &'a FiniteGroup {
        self.left
    }

    pub fn right(&self) -> &'a FiniteGroup {
        self.right
    }

    pub fn order(&self) -> usize {
        self.left.order() * self.right.order()
    }

    #[inline]
    pub fn encode(&self, a: Element, b: Element) -> Element {
        Element::new(a.index() * self.right.order() + b.index())
    }

    #[inline]
    pub fn decode(&self, p: Element) -> (Element, Element) {
        let m = self.right.order();
        (Element::new(p.index() / m), Element::new(p.index() % m))
    }

    #[inline]
    pub fn mul(&self, p: Element, q: Element) -> Element {
        let (a, b) = self.decode(p);
        let (c, d) = self.decode(q);
        self.encode(self.left.mul(a, c), self.right.mul(b, d))
    }

    pub fn inv(&self, p: Element) -> Element {
        let (a, b) = self.decode(p);
        self.encode(self.left.inv(a), self.right.inv(b))
    }

    /// A dense `FiniteGroup` whose element indices are the pair codes.
    pub fn materialize(&self, caps: &Caps) -> Result<FiniteGroup> {
        let n = self.order();
        if n > caps.dense_order {
            return Err(Error::cap("product order for dense table", n, caps.dense_order));
        }
        let mut table = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                table.push(self.mul(Element::new(p), Element::new(q)).index() as u16);
            }
        }
        let mut gens = Vec::new();
        for &a in self.left.generators() {
            gens.push(self.encode(a, Element::IDENTITY));
        }
        for &b in self.right.generators() {
            gens.push(self.encode(Element::IDENTITY, b));
        }
        FiniteGroup::from_table_unchecked(n, table, gens)
    }
}

/// `G x G`, refusing when `|G|^2` exceeds the group-order cap.
pub fn direct_square<'a>(g: &'a FiniteGroup, caps: &Caps) -> Result<ProductGroup<'a>> {
    let n = g.order();
    let sq = n.saturating_mul(n);
    if sq > caps.max_group_order {
        return Err(Error::cap("|G|^2", sq, caps.max_group_order));
    }
    Ok(ProductGroup::new(g, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteGroup {
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::from_cayley_table(&rows).unwrap()
    }

    #[test]
    fn z4_additive_inverse() {
        let z4 = cyclic(4);
        assert_eq!(z4.mul(Element::new(1), Element::new(3)), Element::IDENTITY);
        assert_eq!(z4.inv(Element::new(1)), Element::new(3));
        assert_eq!(z4.order_of(Element::new(2)), 2);
    }

    #[test]
    fn identity_law_and_range_errors() {
        let z5 = cyclic(5);
        for g in z5.elements() {
            assert_eq!(z5.mul(Element::IDENTITY, g), g);
            assert!(z5.commutator(g, g).is_identity());
        }
        assert_eq!(
            z5.try_mul(Element::new(5), Element::new(0)),
            Err(Error::IndexOutOfRange { index: 5, order: 5 })
        );
    }

    #[test]
    fn rejects_non_latin_table() {
        let rows = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(FiniteGroup::from_cayley_table(&rows), Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn rejects_non_associative_loop() {
        // A Latin square with identity 0 that is not associative (order 5 loop).
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_cayley_table(&rows).is_err());
    }

    #[test]
    fn direct_square_orders() {
        let z2 = cyclic(2);
        let caps = Caps::default();
        assert_eq!(direct_square(&z2, &caps).unwrap().order(), 4);
        let sq = direct_square(&z2, &caps).unwrap().materialize(&caps).unwrap();
        sq.check_axioms().unwrap();
        let tight = Caps { max_group_order: 3, ..Caps::default() };
        assert!(matches!(direct_square(&z2, &tight), Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn permutation_backend_matches_dense() {
        let caps = Caps::default();
        let a = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        let b = Permutation::from_cycles(4, &[&[0, 1]]).unwrap();
        let dense = FiniteGroup::from_permutations(&[a.clone(), b.clone()], BackendKind::Dense, &caps)
            .unwrap();
        let perm =
            FiniteGroup::from_permutations(&[a, b], BackendKind::Permutation, &caps).unwrap();
        assert_eq!(dense.order(), 24);
        assert!(!perm.is_dense());
        for g in dense.elements() {
            for h in dense.elements() {
                assert_eq!(dense.mul(g, h), perm.mul(g, h));
            }
            assert_eq!(dense.inv(g), perm.inv(g));
        }
    }

    #[test]
    fn classes_sorted_by_size() {
        let caps = Caps::default();
        let a = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let s3 = FiniteGroup::from_permutations(&[a, b], BackendKind::Auto, &caps).unwrap();
        let cc = s3.conjugacy_classes();
        let sizes: Vec<usize> = cc.classes().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
    }
}
