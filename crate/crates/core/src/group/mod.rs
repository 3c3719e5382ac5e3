//! Finite groups with canonical integer element ids.
//!
//! Every group owns a concrete model (permutations, wreath triples, 2×2
//! matrices, tuples) that decodes an id into a printable element. Groups of
//! order at most [`TABLE_CAP`] also carry a full multiplication table built in
//! the constructor; larger groups compose through the model. The identity is
//! always id 0. Groups are immutable once built.

pub mod field;
pub mod linear;
pub mod perm;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use field::FiniteField;
use linear::{LinearModel, Mat2};
use perm::Perm;

/// Largest order for which a multiplication table is stored (u32 entries, 64 MiB).
pub const TABLE_CAP: usize = 4096;
/// Largest order accepted for groups composed through their model.
pub const ORDER_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Element(u32);

impl Element {
    pub fn new(index: usize) -> Self {
        Element(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Symmetric(usize),
    Wreath(usize),
    Dihedral(usize),
    Cyclic(usize),
    Psl2(u32),
    Sl2(u32),
    Power(Box<GroupKind>, usize),
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Symmetric(n) => write!(f, "S{n}"),
            GroupKind::Wreath(n) => write!(f, "S{n} wr S2"),
            GroupKind::Dihedral(n) => write!(f, "D{n}"),
            GroupKind::Cyclic(n) => write!(f, "Z{n}"),
            GroupKind::Psl2(q) => write!(f, "PSL(2,{q})"),
            GroupKind::Sl2(q) => write!(f, "SL(2,{q})"),
            GroupKind::Power(base, k) => write!(f, "({base})^{k}"),
        }
    }
}

#[derive(Debug)]
enum Model {
    Cyclic(usize),
    /// id = s * n + r encodes r^r s^s with s r s = r^{-1}
    Dihedral(usize),
    /// id = Lehmer rank
    Symmetric(usize),
    /// id = (pi * n! + sigma) * 2 + b
    Wreath { n: usize, base: Arc<FiniteGroup> },
    Linear(LinearModel),
    /// mixed radix, first factor most significant
    Power { base: Arc<FiniteGroup>, k: usize },
}

#[derive(Debug)]
pub struct FiniteGroup {
    kind: GroupKind,
    order: usize,
    model: Model,
    inverses: Vec<Element>,
    table: Option<Vec<u32>>,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

impl FiniteGroup {
    fn build(kind: GroupKind, order: usize, model: Model) -> Self {
        let mut g = FiniteGroup { kind, order, model, inverses: Vec::new(), table: None };
        if order <= TABLE_CAP {
            let mut table = vec![0u32; order * order];
            for x in 0..order {
                for y in 0..order {
                    table[x * order + y] = g.model_compose(x, y) as u32;
                }
            }
            g.table = Some(table);
        }
        let inverses = match &g.model {
            Model::Symmetric(n) => (0..order)
                .map(|x| Element::new(Perm::unrank(*n, x).inverse().rank()))
                .collect(),
            _ if g.table.is_some() => {
                let table = g.table.as_ref().unwrap();
                (0..order)
                    .map(|x| {
                        let y = (0..order).find(|&y| table[x * order + y] == 0).unwrap();
                        Element::new(y)
                    })
                    .collect()
            }
            _ => (0..order).map(|x| Element::new(g.model_inverse(x))).collect(),
        };
        g.inverses = inverses;
        g
    }

    fn model_compose(&self, x: usize, y: usize) -> usize {
        match &self.model {
            Model::Cyclic(n) => (x + y) % n,
            Model::Dihedral(n) => {
                let (r1, s1) = (x % n, x / n);
                let (r2, s2) = (y % n, y / n);
                let r = if s1 == 0 { (r1 + r2) % n } else { (r1 + n - r2) % n };
                (s1 ^ s2) * n + r
            }
            Model::Symmetric(n) => Perm::unrank(*n, x).compose(&Perm::unrank(*n, y)).rank(),
            Model::Wreath { base, .. } => {
                let m = base.order();
                let (p1, s1, b1) = ((x / 2) / m, (x / 2) % m, x % 2);
                let (p2, s2, b2) = ((y / 2) / m, (y / 2) % m, y % 2);
                let (e1, e2) = (Element::new(p1), Element::new(s1));
                let (f1, f2) = (Element::new(p2), Element::new(s2));
                let (pi, sigma) = if b1 == 0 {
                    (base.compose(e1, f1), base.compose(e2, f2))
                } else {
                    (base.compose(e1, f2), base.compose(e2, f1))
                };
                (pi.index() * m + sigma.index()) * 2 + (b1 ^ b2)
            }
            Model::Linear(lin) => lin.compose(x as u32, y as u32) as usize,
            Model::Power { base, k } => {
                let m = base.order();
                let (mut xs, mut ys) = (x, y);
                let mut digits = vec![0usize; *k];
                for d in digits.iter_mut().rev() {
                    let z = base.compose(Element::new(xs % m), Element::new(ys % m));
                    *d = z.index();
                    xs /= m;
                    ys /= m;
                }
                digits.iter().fold(0, |acc, &d| acc * m + d)
            }
        }
    }

    fn model_inverse(&self, x: usize) -> usize {
        match &self.model {
            Model::Cyclic(n) => (n - x) % n,
            Model::Dihedral(n) => {
                if x >= *n {
                    x
                } else {
                    (n - x) % n
                }
            }
            Model::Symmetric(n) => Perm::unrank(*n, x).inverse().rank(),
            Model::Power { base, k } => {
                let m = base.order();
                let mut xs = x;
                let mut digits = vec![0usize; *k];
                for d in digits.iter_mut().rev() {
                    *d = base.inverse(Element::new(xs % m)).index();
                    xs /= m;
                }
                digits.iter().fold(0, |acc, &d| acc * m + d)
            }
            _ => (0..self.order)
                .find(|&y| self.model_compose(x, y) == 0)
                .expect("every element has an inverse"),
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn identity(&self) -> Element {
        Element(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(Element::new)
    }

    pub fn compose(&self, x: Element, y: Element) -> Element {
        match &self.table {
            Some(t) => Element(t[x.index() * self.order + y.index()]),
            None => Element::new(self.model_compose(x.index(), y.index())),
        }
    }

    pub fn inverse(&self, x: Element) -> Element {
        self.inverses[x.index()]
    }

    /// `g x g⁻¹`
    pub fn conjugate(&self, g: Element, x: Element) -> Element {
        self.compose(self.compose(g, x), self.inverse(g))
    }

    pub fn element_order(&self, x: Element) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity() {
            y = self.compose(y, x);
            k += 1;
        }
        k
    }

    pub fn involutions(&self) -> Vec<Element> {
        self.elements()
            .filter(|&x| x != self.identity() && self.compose(x, x) == self.identity())
            .collect()
    }

    /// Sorted conjugacy class of `x`.
    pub fn conjugacy_class(&self, x: Element) -> Vec<Element> {
        let mut seen = vec![false; self.order];
        let mut class = Vec::new();
        for g in self.elements() {
            let y = self.conjugate(g, x);
            if !seen[y.index()] {
                seen[y.index()] = true;
                class.push(y);
            }
        }
        class.sort();
        class
    }

    pub fn centralizer(&self, x: Element) -> Subgroup {
        let elements = self
            .elements()
            .filter(|&c| self.compose(c, x) == self.compose(x, c))
            .collect();
        Subgroup { elements }
    }

    pub fn center(&self) -> Subgroup {
        let elements = self
            .elements()
            .filter(|&z| self.elements().all(|g| self.compose(g, z) == self.compose(z, g)))
            .collect();
        Subgroup { elements }
    }

    /// All classes, ordered by size and then by representative (the smallest id).
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let mut assigned = vec![false; self.order];
        let mut classes = Vec::new();
        for x in self.elements() {
            if assigned[x.index()] {
                continue;
            }
            let members = self.conjugacy_class(x);
            for m in &members {
                assigned[m.index()] = true;
            }
            classes.push(ConjugacyClass { representative: x, members });
        }
        classes.sort_by_key(|c| (c.members.len(), c.representative));
        classes
    }

    /// Maps every element id to the index of its class in `classes`.
    pub fn class_index_map(&self, classes: &[ConjugacyClass]) -> Vec<usize> {
        let mut map = vec![usize::MAX; self.order];
        for (ci, c) in classes.iter().enumerate() {
            for m in &c.members {
                map[m.index()] = ci;
            }
        }
        map
    }

    /// Distinguished involution used as the default hidden-subgroup generator:
    /// `(e,e,1)` for wreath products, `(1 2)` for symmetric groups, a reflection
    /// for dihedral groups, `n/2` in even cyclic groups, the classes of
    /// `[[0,1],[-1,0]]` (odd q) or `[[1,1],[0,1]]` (even q) for PSL/SL, and the
    /// diagonal copy of the base involution for direct powers.
    pub fn distinguished_involution(&self) -> Option<Element> {
        let x = match &self.model {
            Model::Cyclic(n) => {
                if n % 2 != 0 {
                    return None;
                }
                Element::new(n / 2)
            }
            Model::Dihedral(n) => Element::new(*n),
            Model::Symmetric(n) => {
                if *n < 2 {
                    return None;
                }
                let mut imgs: Vec<u8> = (0..*n as u8).collect();
                imgs.swap(0, 1);
                Element::new(Perm::from_images(imgs).ok()?.rank())
            }
            Model::Wreath { .. } => Element::new(1),
            Model::Linear(lin) => {
                let f = &lin.field;
                let m: Mat2 = if f.characteristic() == 2 {
                    [1, 1, 0, 1]
                } else {
                    [0, 1, f.neg(1), 0]
                };
                Element::new(lin.index_of(&m)? as usize)
            }
            Model::Power { base, k } => {
                let h = base.distinguished_involution()?;
                let m = base.order();
                Element::new((0..*k).fold(0, |acc, _| acc * m + h.index()))
            }
        };
        let is_inv = x != self.identity() && self.compose(x, x) == self.identity();
        is_inv.then_some(x)
    }

    /// Permutation image of `x` where the model provides one: symmetric groups
    /// act naturally, wreath products embed in S_2n, PSL acts on the
    /// projective line.
    pub fn as_permutation(&self, x: Element) -> Option<Perm> {
        match &self.model {
            Model::Symmetric(n) => Some(Perm::unrank(*n, x.index())),
            Model::Wreath { n, base } => {
                let (pi, sigma, b) = self.wreath_triple(x)?;
                let p = base.as_permutation(pi)?;
                let s = base.as_permutation(sigma)?;
                let n = *n;
                let mut imgs = vec![0u8; 2 * n];
                for i in 0..n {
                    if b == 0 {
                        imgs[i] = p.apply(i) as u8;
                        imgs[n + i] = (n + s.apply(i)) as u8;
                    } else {
                        imgs[i] = (n + s.apply(i)) as u8;
                        imgs[n + i] = p.apply(i) as u8;
                    }
                }
                Perm::from_images(imgs).ok()
            }
            Model::Linear(lin) if lin.projective => Some(lin.projective_action(x.index() as u32)),
            _ => None,
        }
    }

    /// `(pi, sigma, b)` for wreath products, with `pi, sigma` ids of the base S_n.
    pub fn wreath_triple(&self, x: Element) -> Option<(Element, Element, u8)> {
        match &self.model {
            Model::Wreath { base, .. } => {
                let m = base.order();
                let i = x.index();
                Some((Element::new((i / 2) / m), Element::new((i / 2) % m), (i % 2) as u8))
            }
            _ => None,
        }
    }

    pub fn wreath_element(&self, pi: Element, sigma: Element, b: u8) -> Option<Element> {
        match &self.model {
            Model::Wreath { base, .. } => {
                let m = base.order();
                Some(Element::new((pi.index() * m + sigma.index()) * 2 + b as usize))
            }
            _ => None,
        }
    }

    /// Base group of a wreath product (S_n) or a direct power.
    pub fn base_group(&self) -> Option<&Arc<FiniteGroup>> {
        match &self.model {
            Model::Wreath { base, .. } | Model::Power { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Components of an element of a direct power, first factor first.
    pub fn power_components(&self, x: Element) -> Option<Vec<Element>> {
        match &self.model {
            Model::Power { base, k } => {
                let m = base.order();
                let mut xs = x.index();
                let mut out = vec![Element::default(); *k];
                for d in out.iter_mut().rev() {
                    *d = Element::new(xs % m);
                    xs /= m;
                }
                Some(out)
            }
            _ => None,
        }
    }

    pub fn power_element(&self, parts: &[Element]) -> Option<Element> {
        match &self.model {
            Model::Power { base, k } if parts.len() == *k => {
                let m = base.order();
                Some(Element::new(parts.iter().fold(0, |acc, p| acc * m + p.index())))
            }
            _ => None,
        }
    }

    pub fn matrix_of(&self, x: Element) -> Option<Mat2> {
        match &self.model {
            Model::Linear(lin) => Some(lin.matrix(x.index() as u32)),
            _ => None,
        }
    }

    /// Element with matrix `m` (up to sign in the projective case).
    pub fn element_of_matrix(&self, m: &Mat2) -> Option<Element> {
        match &self.model {
            Model::Linear(lin) => lin.index_of(m).map(|i| Element::new(i as usize)),
            _ => None,
        }
    }

    pub fn field(&self) -> Option<&FiniteField> {
        match &self.model {
            Model::Linear(lin) => Some(&lin.field),
            _ => None,
        }
    }

    pub fn format_element(&self, x: Element) -> String {
        match &self.model {
            Model::Cyclic(_) => x.index().to_string(),
            Model::Dihedral(n) => {
                let (r, s) = (x.index() % n, x.index() / n);
                match (r, s) {
                    (0, 0) => "e".to_string(),
                    (0, _) => "s".to_string(),
                    (r, 0) => format!("r^{r}"),
                    (r, _) => format!("r^{r} s"),
                }
            }
            Model::Symmetric(n) => Perm::unrank(*n, x.index()).to_cycle_string(),
            Model::Wreath { base, .. } => {
                let (pi, sigma, b) = self.wreath_triple(x).unwrap();
                format!("({}|{}|{})", base.format_element(pi), base.format_element(sigma), b)
            }
            Model::Linear(lin) => linear::format_mat(&lin.matrix(x.index() as u32)),
            Model::Power { base, .. } => {
                let parts: Vec<String> = self
                    .power_components(x)
                    .unwrap()
                    .into_iter()
                    .map(|p| base.format_element(p))
                    .collect();
                format!("[{}]", parts.join("; "))
            }
        }
    }

    /// Inverse of [`format_element`](Self::format_element). Symmetric groups also
    /// accept commas inside cycles; wreath products accept either `(pi|sigma|b)`
    /// or a cycle word on `2n` points lying in the embedded copy.
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot parse element {s:?} of {}", self.kind));
        match &self.model {
            Model::Cyclic(n) => {
                let v: usize = s.parse().map_err(|_| bad())?;
                (v < *n).then(|| Element::new(v)).ok_or_else(bad)
            }
            Model::Dihedral(n) => {
                let (rpart, spart) = match s.strip_suffix('s') {
                    Some(r) => (r.trim(), 1),
                    None => (s, 0),
                };
                let r = match rpart {
                    "" | "e" => 0,
                    "r" => 1,
                    other => other
                        .strip_prefix("r^")
                        .and_then(|e| e.parse::<usize>().ok())
                        .ok_or_else(bad)?,
                };
                Ok(Element::new(spart * n + r % n))
            }
            Model::Symmetric(n) => Ok(Element::new(Perm::parse_cycles(s, *n)?.rank())),
            Model::Wreath { n, base } => {
                if s.contains('|') {
                    let inner = s
                        .strip_prefix('(')
                        .and_then(|t| t.strip_suffix(')'))
                        .ok_or_else(bad)?;
                    let parts: Vec<&str> = inner.split('|').collect();
                    if parts.len() != 3 {
                        return Err(bad());
                    }
                    let pi = base.parse_element(parts[0])?;
                    let sigma = base.parse_element(parts[1])?;
                    let b: u8 = parts[2].trim().parse().map_err(|_| bad())?;
                    if b > 1 {
                        return Err(bad());
                    }
                    Ok(self.wreath_element(pi, sigma, b).unwrap())
                } else {
                    let target = Perm::parse_cycles(s, 2 * n)?;
                    self.elements()
                        .find(|&x| self.as_permutation(x).as_ref() == Some(&target))
                        .ok_or_else(|| {
                            Error::InvalidElement(format!("{s} does not lie in {}", self.kind))
                        })
                }
            }
            Model::Linear(lin) => {
                let digits: Vec<u8> = s
                    .split(|c: char| !c.is_ascii_digit())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<u8>().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                if digits.len() != 4 || digits.iter().any(|&d| d as u32 >= lin.field.order()) {
                    return Err(bad());
                }
                let m = [digits[0], digits[1], digits[2], digits[3]];
                lin.index_of(&m)
                    .map(|i| Element::new(i as usize))
                    .ok_or_else(|| Error::InvalidElement(format!("{s} has determinant != 1")))
            }
            Model::Power { base, k } => {
                let inner = s
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(bad)?;
                let parts: Vec<Element> = inner
                    .split(';')
                    .map(|p| base.parse_element(p))
                    .collect::<Result<_>>()?;
                if parts.len() == 1 && *k > 1 {
                    // shorthand: diagonal copy
                    return Ok(self.power_element(&vec![parts[0]; *k]).unwrap());
                }
                self.power_element(&parts).ok_or_else(bad)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub representative: Element,
    pub members: Vec<Element>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A subgroup stored as a sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<Element>,
}

impl Subgroup {
    /// Validates closure, inverses and the identity.
    pub fn new(group: &FiniteGroup, mut elements: Vec<Element>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        if elements.iter().any(|x| x.index() >= group.order()) {
            return Err(Error::NotSubgroup("element id out of range".into()));
        }
        if elements.first() != Some(&group.identity()) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        let set: HashSet<Element> = elements.iter().copied().collect();
        for &x in &elements {
            if !set.contains(&group.inverse(x)) {
                return Err(Error::NotSubgroup(format!(
                    "inverse of {} missing",
                    group.format_element(x)
                )));
            }
            for &y in &elements {
                if !set.contains(&group.compose(x, y)) {
                    return Err(Error::NotSubgroup(format!(
                        "not closed: {} * {}",
                        group.format_element(x),
                        group.format_element(y)
                    )));
                }
            }
        }
        Ok(Subgroup { elements })
    }

    pub fn generated(group: &FiniteGroup, generators: &[Element]) -> Self {
        let mut set: HashSet<Element> = HashSet::from([group.identity()]);
        let mut frontier = vec![group.identity()];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = group.compose(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        let mut elements: Vec<Element> = set.into_iter().collect();
        elements.sort();
        Subgroup { elements }
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Subgroup { elements: vec![group.identity()] }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Subgroup { elements: group.elements().collect() }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn contains(&self, x: Element) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// `g H g⁻¹`
    pub fn conjugate(&self, group: &FiniteGroup, g: Element) -> Subgroup {
        let mut elements: Vec<Element> =
            self.elements.iter().map(|&x| group.conjugate(g, x)).collect();
        elements.sort();
        Subgroup { elements }
    }

    pub fn is_normal(&self, group: &FiniteGroup) -> bool {
        group.elements().all(|g| self.conjugate(group, g) == *self)
    }
}

pub fn make_symmetric(n: usize) -> Result<FiniteGroup> {
    if !(1..=8).contains(&n) {
        return Err(Error::OutOfRange(format!("symmetric group degree {n} not in 1..=8")));
    }
    Ok(FiniteGroup::build(GroupKind::Symmetric(n), factorial(n), Model::Symmetric(n)))
}

pub fn make_wreath_s2(n: usize) -> Result<FiniteGroup> {
    if !(2..=5).contains(&n) {
        return Err(Error::OutOfRange(format!("wreath product degree {n} not in 2..=5")));
    }
    let base = Arc::new(make_symmetric(n)?);
    let m = base.order();
    Ok(FiniteGroup::build(GroupKind::Wreath(n), 2 * m * m, Model::Wreath { n, base }))
}

pub fn make_dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 2 || 2 * n > ORDER_CAP {
        return Err(Error::OutOfRange(format!("dihedral parameter {n} not in 2..={}", ORDER_CAP / 2)));
    }
    Ok(FiniteGroup::build(GroupKind::Dihedral(n), 2 * n, Model::Dihedral(n)))
}

pub fn make_cyclic(n: usize) -> Result<FiniteGroup> {
    if n < 1 || n > ORDER_CAP {
        return Err(Error::OutOfRange(format!("cyclic order {n} not in 1..={ORDER_CAP}")));
    }
    Ok(FiniteGroup::build(GroupKind::Cyclic(n), n, Model::Cyclic(n)))
}

pub const PSL_SUPPORTED: [u32; 7] = [4, 5, 7, 8, 9, 11, 13];

pub fn make_psl2(q: u32) -> Result<FiniteGroup> {
    if !PSL_SUPPORTED.contains(&q) {
        return Err(Error::OutOfRange(format!(
            "PSL(2,q) supported for q in {PSL_SUPPORTED:?}, got {q}"
        )));
    }
    let field = FiniteField::new(q)?;
    let projective = q % 2 == 1;
    let lin = LinearModel::new(field, projective);
    let order = lin.order();
    Ok(FiniteGroup::build(GroupKind::Psl2(q), order, Model::Linear(lin)))
}

pub fn make_sl2(q: u32) -> Result<FiniteGroup> {
    if !(q == 2 || q == 3 || PSL_SUPPORTED.contains(&q)) {
        return Err(Error::OutOfRange(format!("SL(2,q) supported for q <= 13 prime power, got {q}")));
    }
    let field = FiniteField::new(q)?;
    let lin = LinearModel::new(field, false);
    let order = lin.order();
    Ok(FiniteGroup::build(GroupKind::Sl2(q), order, Model::Linear(lin)))
}

pub fn make_direct_power(base: Arc<FiniteGroup>, k: usize) -> Result<FiniteGroup> {
    if k == 0 {
        return Err(Error::OutOfRange("direct power exponent must be >= 1".into()));
    }
    let order = (0..k)
        .try_fold(1usize, |acc, _| acc.checked_mul(base.order()))
        .filter(|&o| o <= ORDER_CAP)
        .ok_or_else(|| {
            Error::OrderOverflow(format!("|{}|^{k} exceeds {ORDER_CAP}", base.kind()))
        })?;
    let kind = GroupKind::Power(Box::new(base.kind().clone()), k);
    Ok(FiniteGroup::build(kind, order, Model::Power { base, k }))
}

/// Image of the embedding `S_n wr S_2 -> S_2n` as ids of `big` (which must be S_2n).
pub fn wreath_embedding(wreath: &FiniteGroup, big: &FiniteGroup) -> Result<Vec<Element>> {
    let n = match wreath.kind() {
        GroupKind::Wreath(n) => *n,
        k => return Err(Error::Embedding(format!("{k} is not a wreath product"))),
    };
    if big.kind() != &GroupKind::Symmetric(2 * n) {
        return Err(Error::Embedding(format!("target must be S{}", 2 * n)));
    }
    Ok(wreath
        .elements()
        .map(|x| Element::new(wreath.as_permutation(x).unwrap().rank()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(g: &FiniteGroup) {
        let n = g.order();
        let e = g.identity();
        for x in g.elements() {
            assert_eq!(g.compose(e, x), x);
            assert_eq!(g.compose(x, e), x);
            assert_eq!(g.compose(x, g.inverse(x)), e);
        }
        if n <= 200 {
            for x in g.elements() {
                for y in g.elements() {
                    let xy = g.compose(x, y);
                    for z in g.elements() {
                        assert_eq!(g.compose(xy, z), g.compose(x, g.compose(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn symmetric_orders_and_involutions() {
        assert_eq!(make_symmetric(1).unwrap().order(), 1);
        let s3 = make_symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.involutions().len(), 3);
        let s4 = make_symmetric(4).unwrap();
        assert_eq!(s4.order(), 24);
        assert_eq!(s4.center().order(), 1);
        check_axioms(&s3);
        check_axioms(&s4);
        assert!(make_symmetric(0).is_err());
        assert!(make_symmetric(9).is_err());
    }

    #[test]
    fn wreath_multiplication_rule() {
        let g = make_wreath_s2(3).unwrap();
        assert_eq!(g.order(), 72);
        check_axioms(&g);
        let base = g.base_group().unwrap().clone();
        let p1 = base.parse_element("(1 2)").unwrap();
        let s1 = base.parse_element("(1 2 3)").unwrap();
        let p2 = base.parse_element("(2 3)").unwrap();
        let s2 = base.parse_element("(1 3)").unwrap();
        let x = g.wreath_element(p1, s1, 1).unwrap();
        let y = g.wreath_element(p2, s2, 1).unwrap();
        let expected = g
            .wreath_element(base.compose(p1, s2), base.compose(s1, p2), 0)
            .unwrap();
        assert_eq!(g.compose(x, y), expected);
    }

    #[test]
    fn wreath_swap_class_is_involutive_swaps() {
        for n in 2..=4 {
            let g = make_wreath_s2(n).unwrap();
            let base = g.base_group().unwrap();
            let h = g.distinguished_involution().unwrap();
            assert_eq!(g.format_element(h), "(()|()|1)");
            let class = g.conjugacy_class(h);
            let mut swaps: Vec<Element> = base
                .elements()
                .map(|p| g.wreath_element(p, base.inverse(p), 1).unwrap())
                .collect();
            swaps.sort();
            assert_eq!(class, swaps);
            assert_eq!(class.len(), factorial(n));
        }
    }

    #[test]
    fn wreath_embedding_is_homomorphism() {
        let g = make_wreath_s2(3).unwrap();
        let s6 = make_symmetric(6).unwrap();
        let emb = wreath_embedding(&g, &s6).unwrap();
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(emb[g.compose(x, y).index()], s6.compose(emb[x.index()], emb[y.index()]));
            }
        }
        let h = g.distinguished_involution().unwrap();
        assert_eq!(s6.format_element(emb[h.index()]), "(1 4)(2 5)(3 6)");
    }

    #[test]
    fn psl_orders_and_involutions() {
        let expected = [(4, 60), (5, 60), (7, 168), (8, 504), (9, 360), (11, 660), (13, 1092)];
        for (q, order) in expected {
            let g = make_psl2(q).unwrap();
            assert_eq!(g.order(), order, "q = {q}");
            let h = g.distinguished_involution().unwrap();
            assert_eq!(g.element_order(h), 2);
        }
        let g5 = make_psl2(5).unwrap();
        let inv = g5.involutions();
        assert_eq!(inv.len(), 15);
        assert_eq!(g5.conjugacy_class(inv[0]).len(), 15);
        let g8 = make_psl2(8).unwrap();
        assert_eq!(g8.center().order(), 1);
        let g13 = make_psl2(13).unwrap();
        let h = g13.distinguished_involution().unwrap();
        assert_eq!(g13.conjugacy_class(h).len(), 91);
        assert_eq!(g13.centralizer(h).order(), 12);
        assert!(make_psl2(6).is_err());
        assert!(make_psl2(16).is_err());
    }

    #[test]
    fn psl_action_is_faithful() {
        let g = make_psl2(7).unwrap();
        let perms: HashSet<Perm> = g.elements().map(|x| g.as_permutation(x).unwrap()).collect();
        assert_eq!(perms.len(), g.order());
        for x in g.elements().take(20) {
            for y in g.elements().take(20) {
                let pxy = g.as_permutation(g.compose(x, y)).unwrap();
                let composed = g.as_permutation(x).unwrap().compose(&g.as_permutation(y).unwrap());
                assert_eq!(pxy, composed);
            }
        }
    }

    #[test]
    fn dihedral_cyclic_and_powers() {
        let d4 = make_dihedral(4).unwrap();
        assert_eq!(d4.order(), 8);
        assert_eq!(d4.involutions().len(), 5);
        check_axioms(&d4);
        let z6 = make_cyclic(6).unwrap();
        check_axioms(&z6);
        let s3 = Arc::new(make_symmetric(3).unwrap());
        let p1 = make_direct_power(s3.clone(), 1).unwrap();
        assert_eq!(p1.order(), 6);
        for x in p1.elements() {
            for y in p1.elements() {
                assert_eq!(p1.compose(x, y), s3.compose(x, y));
            }
        }
        let p2 = make_direct_power(s3, 2).unwrap();
        assert_eq!(p2.order(), 36);
        check_axioms(&p2);
        let s4 = Arc::new(make_symmetric(4).unwrap());
        assert_eq!(make_direct_power(s4.clone(), 4).unwrap().order(), 331_776);
        assert!(matches!(make_direct_power(s4, 5), Err(Error::OrderOverflow(_))));
        let s5 = Arc::new(make_symmetric(5).unwrap());
        assert!(matches!(make_direct_power(s5, 3), Err(Error::OrderOverflow(_))));
    }

    #[test]
    fn class_and_centralizer_sizes_multiply_to_order() {
        let groups = [
            make_symmetric(4).unwrap(),
            make_wreath_s2(3).unwrap(),
            make_psl2(5).unwrap(),
            make_dihedral(5).unwrap(),
        ];
        for g in &groups {
            for x in g.elements() {
                assert_eq!(g.conjugacy_class(x).len() * g.centralizer(x).order(), g.order());
            }
        }
        let s4 = &groups[0];
        let t = s4.parse_element("(1 2)").unwrap();
        assert_eq!(s4.centralizer(t).order(), 4);
        assert_eq!(s4.conjugacy_class(s4.identity()), vec![s4.identity()]);
    }

    #[test]
    fn subgroup_validation() {
        let s3 = make_symmetric(3).unwrap();
        let t = s3.parse_element("(1 2)").unwrap();
        let h = Subgroup::new(&s3, vec![s3.identity(), t]).unwrap();
        assert_eq!(h.order(), 2);
        let c = s3.parse_element("(1 2 3)").unwrap();
        assert!(Subgroup::new(&s3, vec![s3.identity(), c]).is_err());
        assert!(Subgroup::new(&s3, vec![t]).is_err());
        let a3 = Subgroup::generated(&s3, &[c]);
        assert_eq!(a3.order(), 3);
        assert!(a3.is_normal(&s3));
        assert!(!h.is_normal(&s3));
        for g in s3.elements() {
            let hg = h.conjugate(&s3, g);
            assert_eq!(hg.order(), 2);
            assert_eq!(s3.element_order(hg.elements()[1]), 2);
        }
    }

    #[test]
    fn element_formatting_roundtrip() {
        let groups = [
            make_symmetric(4).unwrap(),
            make_wreath_s2(2).unwrap(),
            make_psl2(9).unwrap(),
            make_dihedral(6).unwrap(),
            make_cyclic(5).unwrap(),
            make_direct_power(Arc::new(make_symmetric(3).unwrap()), 2).unwrap(),
        ];
        for g in &groups {
            for x in g.elements() {
                assert_eq!(g.parse_element(&g.format_element(x)).unwrap(), x, "{}", g.kind());
            }
        }
    }
}
