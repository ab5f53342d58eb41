//! Standard form for rational constraints: one finite monoid of Boolean-matrix
//! tuples carrying an involution and an action of the twisting group, such
//! that every constraint language (and every `Fix φ`) is the full preimage of
//! a designated subset.

use std::collections::HashMap;
use std::fmt;

use crate::automaton::Automaton;
use crate::error::Error;
use crate::words::{Letter, SignedPermutation, Word};

/// A square Boolean matrix, rows bit-packed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolMat {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BoolMat {
    pub fn zero(n: usize) -> Self {
        let words_per_row = n.div_ceil(64).max(1);
        BoolMat { n, words_per_row, bits: vec![0; n * words_per_row] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BoolMat::zero(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let idx = i * self.words_per_row + j / 64;
        if v {
            self.bits[idx] |= 1 << (j % 64);
        } else {
            self.bits[idx] &= !(1 << (j % 64));
        }
    }

    /// Boolean matrix product: `c_ik = ⋁_j a_ij ∧ b_jk`.
    pub fn mul(&self, other: &BoolMat) -> BoolMat {
        assert_eq!(self.n, other.n);
        let mut out = BoolMat::zero(self.n);
        for i in 0..self.n {
            let row = i * self.words_per_row;
            let orow = i * out.words_per_row;
            for j in 0..self.n {
                if self.bits[row + j / 64] >> (j % 64) & 1 == 1 {
                    let brow = j * other.words_per_row;
                    for k in 0..self.words_per_row {
                        out.bits[orow + k] |= other.bits[brow + k];
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> BoolMat {
        let mut out = BoolMat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) {
                    out.set(j, i, true);
                }
            }
        }
        out
    }
}

impl fmt::Debug for BoolMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            for j in 0..self.n {
                write!(f, "{}", if self.get(i, j) { 1 } else { 0 })?;
            }
            if i + 1 < self.n {
                write!(f, "|")?;
            }
        }
        Ok(())
    }
}

/// Index of a monoid element inside its [`ConstraintMonoid`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemId(pub u32);

impl ElemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// One element: per (automorphism, language) factor, the transition matrix of
/// the twisted word and the transpose matrix of its bar, so that the
/// involution is `(P, Q) ↦ (ᵗQ, ᵗP)` factor-wise.
type ElementData = Vec<(BoolMat, BoolMat)>;

/// Maximum number of elements before construction aborts with
/// [`Error::Explosion`].
pub const DEFAULT_ELEMENT_CAP: usize = 20_000;

const MULT_TABLE_LIMIT: usize = 2_048;

/// A finite monoid (more precisely, the image of `S±⁺`, hence a semigroup
/// without a forced unit) representing a family of constraint languages, with
/// involution, twisting-group action, and designated subsets.
pub struct ConstraintMonoid {
    n_letters: usize,
    perms: Vec<SignedPermutation>,
    identity_perm: usize,
    comp_table: Vec<Vec<usize>>,
    lang_names: Vec<String>,
    elements: Vec<ElementData>,
    index: HashMap<ElementData, ElemId>,
    letter_images: Vec<ElemId>,
    inv_table: Vec<ElemId>,
    action_table: Vec<Vec<ElemId>>,
    mult_table: Option<Vec<ElemId>>,
    designated: Vec<(String, Vec<bool>)>,
    idem: (u64, u64),
}

impl ConstraintMonoid {
    /// Builds the standard form for the named languages and the closed
    /// automorphism set `perms`. A `Fix φ` designated subset is added for
    /// every `φ`. Fails with [`Error::Explosion`] past `cap` elements.
    pub fn build(
        n_letters: usize,
        languages: &[(String, Automaton)],
        perms: &[SignedPermutation],
        cap: usize,
    ) -> Result<ConstraintMonoid, Error> {
        assert!(n_letters % 2 == 0 && n_letters > 0);
        let perms: Vec<SignedPermutation> = perms.to_vec();
        let identity_perm = perms
            .iter()
            .position(|p| p.is_identity())
            .expect("automorphism set must contain the identity");
        // closure sanity: composition lands back in the set
        let comp_table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let c = a.compose(b);
                        perms
                            .iter()
                            .position(|p| *p == c)
                            .expect("automorphism set is not closed under composition")
                    })
                    .collect()
            })
            .collect();

        // Prepare factor automata: determinised and pruned, plus Fix φ per φ.
        let mut lang_names: Vec<String> = Vec::new();
        let mut factor_automata: Vec<Automaton> = Vec::new();
        for (name, a) in languages {
            assert_eq!(a.n_letters(), n_letters);
            lang_names.push(name.clone());
            factor_automata.push(a.determinize(false).prune());
        }
        for (i, p) in perms.iter().enumerate() {
            lang_names.push(format!("fix:{i}"));
            factor_automata.push(Automaton::fixed_words(n_letters, p));
        }
        {
            let mut sorted = lang_names.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), lang_names.len(), "duplicate language names");
        }

        // Per-language letter matrices.
        let letter_mat = |a: &Automaton, l: Letter| -> BoolMat {
            let mut m = BoolMat::zero(a.n_states().max(1));
            for &(s, ll, t) in a.edges() {
                if ll == l {
                    m.set(s, t, true);
                }
            }
            m
        };

        let n_langs = factor_automata.len();
        let n_perms = perms.len();
        let factor_count = n_perms * n_langs;
        let letter_elem = |s: Letter| -> ElementData {
            let mut data = Vec::with_capacity(factor_count);
            for p in &perms {
                let img = p.apply(s);
                for a in &factor_automata {
                    data.push((letter_mat(a, img), letter_mat(a, img.bar()).transpose()));
                }
            }
            data
        };

        let mul_data = |a: &ElementData, b: &ElementData| -> ElementData {
            a.iter()
                .zip(b.iter())
                .map(|((p1, q1), (p2, q2))| (p1.mul(p2), q1.mul(q2)))
                .collect()
        };

        // Image closure under right multiplication by letters.
        let mut elements: Vec<ElementData> = Vec::new();
        let mut index: HashMap<ElementData, ElemId> = HashMap::new();
        let mut letter_images = Vec::with_capacity(n_letters);
        let intern = |data: ElementData,
                          elements: &mut Vec<ElementData>,
                          index: &mut HashMap<ElementData, ElemId>|
         -> Result<(ElemId, bool), Error> {
            if let Some(&id) = index.get(&data) {
                return Ok((id, false));
            }
            if elements.len() >= cap {
                return Err(Error::Explosion { cap });
            }
            let id = ElemId(elements.len() as u32);
            index.insert(data.clone(), id);
            elements.push(data);
            Ok((id, true))
        };
        let letter_data: Vec<ElementData> =
            (0..n_letters).map(|l| letter_elem(Letter(l as u32))).collect();
        for data in &letter_data {
            let (id, _) = intern(data.clone(), &mut elements, &mut index)?;
            letter_images.push(id);
        }
        let mut cursor = 0;
        while cursor < elements.len() {
            let current = elements[cursor].clone();
            for data in &letter_data {
                let prod = mul_data(&current, data);
                intern(prod, &mut elements, &mut index)?;
            }
            cursor += 1;
        }

        // Involution: ρ(w̄) = inv(ρ(w)) stays inside the image.
        let inv_table: Vec<ElemId> = elements
            .iter()
            .map(|data| {
                let inv: ElementData = data
                    .iter()
                    .map(|(p, q)| (q.transpose(), p.transpose()))
                    .collect();
                *index.get(&inv).expect("image not closed under involution")
            })
            .collect();

        // Action: permute factors, (α, ℓ) of φ·m is (α∘φ, ℓ) of m.
        let action_table: Vec<Vec<ElemId>> = (0..n_perms)
            .map(|phi| {
                elements
                    .iter()
                    .map(|data| {
                        let mut out = Vec::with_capacity(factor_count);
                        for alpha in 0..n_perms {
                            let src = comp_table[alpha][phi];
                            for lang in 0..n_langs {
                                out.push(data[src * n_langs + lang].clone());
                            }
                        }
                        *index.get(&out).expect("image not closed under the action")
                    })
                    .collect()
            })
            .collect();

        let mult_table = if elements.len() <= MULT_TABLE_LIMIT {
            let n = elements.len();
            let mut table = vec![ElemId(0); n * n];
            for a in 0..n {
                for b in 0..n {
                    let prod = mul_data(&elements[a], &elements[b]);
                    table[a * n + b] = *index.get(&prod).expect("image not closed under product");
                }
            }
            Some(table)
        } else {
            None
        };

        // Designated subsets: membership of a word in language ℓ is a hit of
        // the (identity automorphism, ℓ) forward matrix on Start × Accept.
        let designated: Vec<(String, Vec<bool>)> = lang_names
            .iter()
            .enumerate()
            .map(|(lang, name)| {
                let a = &factor_automata[lang];
                let factor = identity_perm * n_langs + lang;
                let bits: Vec<bool> = elements
                    .iter()
                    .map(|data| {
                        let m = &data[factor].0;
                        a.start().iter().any(|&s| {
                            a.accept().iter().any(|&t| s < m.n() && t < m.n() && m.get(s, t))
                        })
                    })
                    .collect();
                (name.clone(), bits)
            })
            .collect();

        let mut monoid = ConstraintMonoid {
            n_letters,
            perms,
            identity_perm,
            comp_table,
            lang_names,
            elements,
            index,
            letter_images,
            inv_table,
            action_table,
            mult_table,
            designated,
            idem: (0, 0),
        };
        monoid.idem = monoid.compute_idempotence();
        Ok(monoid)
    }

    pub fn n_letters(&self) -> usize {
        self.n_letters
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element_ids(&self) -> impl Iterator<Item = ElemId> {
        (0..self.elements.len() as u32).map(ElemId)
    }

    pub fn perms(&self) -> &[SignedPermutation] {
        &self.perms
    }

    pub fn identity_perm(&self) -> usize {
        self.identity_perm
    }

    pub fn compose_perms(&self, a: usize, b: usize) -> usize {
        self.comp_table[a][b]
    }

    pub fn perm_index(&self, p: &SignedPermutation) -> Option<usize> {
        self.perms.iter().position(|q| q == p)
    }

    pub fn inverse_perm(&self, a: usize) -> usize {
        let inv = self.perms[a].inverse();
        self.perm_index(&inv).expect("closed group")
    }

    pub fn letter_image(&self, l: Letter) -> ElemId {
        self.letter_images[l.index()]
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        if let Some(table) = &self.mult_table {
            return table[a.index() * self.elements.len() + b.index()];
        }
        let prod: ElementData = self.elements[a.index()]
            .iter()
            .zip(self.elements[b.index()].iter())
            .map(|((p1, q1), (p2, q2))| (p1.mul(p2), q1.mul(q2)))
            .collect();
        *self.index.get(&prod).expect("image closed under product")
    }

    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inv_table[a.index()]
    }

    /// The action `ρ(φ(w)) = φ · ρ(w)` for `φ` given by its index in the
    /// stored automorphism list.
    pub fn act(&self, perm: usize, a: ElemId) -> ElemId {
        self.action_table[perm][a.index()]
    }

    /// Evaluates the morphism on a non-empty word.
    pub fn eval(&self, w: &Word) -> Result<ElemId, Error> {
        let mut letters = w.iter();
        let first = letters.next().ok_or(Error::EmptyWord)?;
        let mut acc = self.letter_image(first);
        for l in letters {
            acc = self.mul(acc, self.letter_image(l));
        }
        Ok(acc)
    }

    /// Membership of an element in the designated subset of a named language.
    pub fn in_designated(&self, name: &str, m: ElemId) -> bool {
        self.designated
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, bits)| bits[m.index()])
            .unwrap_or(false)
    }

    pub fn designated_names(&self) -> impl Iterator<Item = &str> {
        self.designated.iter().map(|(n, _)| n.as_str())
    }

    pub fn designated_set(&self, name: &str) -> Option<Vec<ElemId>> {
        let (_, bits) = self.designated.iter().find(|(n, _)| n == name)?;
        Some(
            bits.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| ElemId(i as u32))
                .collect(),
        )
    }

    pub fn in_fix(&self, perm: usize, m: ElemId) -> bool {
        let name = format!("fix:{perm}");
        self.in_designated(&name, m)
    }

    /// A shortest non-empty word with `eval = m`; breadth-first in the
    /// canonical letter order, so deterministic.
    pub fn shortest_preimage(&self, m: ElemId) -> Result<Word, Error> {
        if m.index() >= self.elements.len() {
            return Err(Error::NotInImage(m.index()));
        }
        let n = self.elements.len();
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        for l in 0..self.n_letters {
            let letter = Letter(l as u32);
            let id = self.letter_image(letter);
            if !seen[id.index()] {
                seen[id.index()] = true;
                if id == m {
                    return Ok(Word::single(letter));
                }
                queue.push_back((id, Word::single(letter)));
            }
        }
        while let Some((id, word)) = queue.pop_front() {
            for l in 0..self.n_letters {
                let letter = Letter(l as u32);
                let next = self.mul(id, self.letter_image(letter));
                if !seen[next.index()] {
                    seen[next.index()] = true;
                    let mut w = word.clone();
                    w.0.push(letter);
                    if next == m {
                        return Ok(w);
                    }
                    queue.push_back((next, w));
                }
            }
        }
        Err(Error::NotInImage(m.index()))
    }

    /// `(α, β)` such that `m₁ m₂^β m₃ = m₁ m₂^(αt+β) m₃` for all elements and
    /// all `t ≥ 0`: β is the largest pre-period of a power sequence and α the
    /// least common multiple of the eventual periods.
    pub fn idempotence_constants(&self) -> (u64, u64) {
        self.idem
    }

    fn compute_idempotence(&self) -> (u64, u64) {
        let mut alpha: u64 = 1;
        let mut beta: u64 = 1;
        for id in self.element_ids() {
            let mut seen: HashMap<ElemId, u64> = HashMap::new();
            let mut power = id;
            let mut k: u64 = 1;
            let (pre, period) = loop {
                if let Some(&first) = seen.get(&power) {
                    break (first, k - first);
                }
                seen.insert(power, k);
                power = self.mul(power, id);
                k += 1;
            };
            beta = beta.max(pre);
            alpha = num_integer::lcm(alpha, period);
        }
        (alpha, beta)
    }

    /// Serialises the element for certificates: factor matrices in order.
    pub fn element_repr(&self, m: ElemId) -> String {
        let data = &self.elements[m.index()];
        data.iter()
            .map(|(p, q)| format!("{p:?};{q:?}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn lang_names(&self) -> &[String] {
        &self.lang_names
    }
}

impl fmt::Debug for ConstraintMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ConstraintMonoid({} elements, {} langs, {} perms)",
            self.elements.len(),
            self.lang_names.len(),
            self.perms.len()
        )
    }
}

/// Divisor tables over a monoid, shared by the branch enumeration and the
/// constraint-refinement step of the prelamination generator.
pub struct DivisorTables {
    fact: HashMap<ElemId, Vec<(ElemId, ElemId)>>,
    ldiv: HashMap<(ElemId, ElemId), Vec<ElemId>>,
}

impl DivisorTables {
    pub fn build(m: &ConstraintMonoid) -> DivisorTables {
        let mut fact: HashMap<ElemId, Vec<(ElemId, ElemId)>> = HashMap::new();
        let mut ldiv: HashMap<(ElemId, ElemId), Vec<ElemId>> = HashMap::new();
        for a in m.element_ids() {
            for b in m.element_ids() {
                let c = m.mul(a, b);
                fact.entry(c).or_default().push((a, b));
                ldiv.entry((a, c)).or_default().push(b);
            }
        }
        DivisorTables { fact, ldiv }
    }

    /// All `(a, b)` with `a·b = c`, in canonical order.
    pub fn factorisations(&self, c: ElemId) -> &[(ElemId, ElemId)] {
        self.fact.get(&c).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All `b` with `a·b = c`, in canonical order.
    pub fn left_quotients(&self, a: ElemId, c: ElemId) -> &[ElemId] {
        self.ldiv.get(&(a, c)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All length-`k` tuples with the given product.
    pub fn factor_tuples(&self, product: ElemId, k: usize) -> Vec<Vec<ElemId>> {
        assert!(k >= 1);
        if k == 1 {
            return vec![vec![product]];
        }
        let mut out = Vec::new();
        for &(a, rest) in self.factorisations(product) {
            for mut tail in self.factor_tuples(rest, k - 1) {
                let mut tuple = Vec::with_capacity(k);
                tuple.push(a);
                tuple.append(&mut tail);
                out.push(tuple);
            }
        }
        out
    }
}
