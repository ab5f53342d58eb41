//! Involutive alphabets, words with free reduction, and the finite group of
//! basis-permuting automorphisms.
//!
//! Letters are interned small integers: the base letter `i` of `S` is `2i`
//! and its formal inverse is `2i + 1`, so the bar involution is a single xor.
//! The numeric order on letters is the canonical order used by every
//! enumeration in the crate.

use std::collections::BTreeSet;
use std::fmt;

/// A letter of `S ∪ S̄`, interned as a small integer.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

impl Letter {
    /// The bar involution on letters.
    #[inline]
    pub fn bar(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// True for letters of `S` (as opposed to `S̄`).
    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Index of the underlying base letter in `S`.
    #[inline]
    pub fn base(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "{}", self.base())
        } else {
            write!(f, "{}'", self.base())
        }
    }
}

/// A finite set `S` with a disjoint copy `S̄` and the fixed-point-free bar
/// involution exchanging them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutiveAlphabet {
    names: Vec<String>,
}

impl InvolutiveAlphabet {
    /// Builds an alphabet from base letter names. Names must be distinct.
    pub fn new(names: Vec<String>) -> Self {
        let set: BTreeSet<&String> = names.iter().collect();
        assert_eq!(set.len(), names.len(), "duplicate letter names");
        InvolutiveAlphabet { names }
    }

    pub fn with_size(n: usize) -> Self {
        InvolutiveAlphabet::new((0..n).map(|i| format!("s{i}")).collect())
    }

    /// Number of base letters `|S|`.
    pub fn size(&self) -> usize {
        self.names.len()
    }

    /// Number of signed letters `|S ∪ S̄|`.
    pub fn signed_size(&self) -> usize {
        2 * self.names.len()
    }

    /// All signed letters in canonical order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.signed_size() as u32).map(Letter)
    }

    pub fn letter(&self, base: usize) -> Letter {
        assert!(base < self.size());
        Letter((base * 2) as u32)
    }

    /// Prints a letter: bar letters carry a trailing apostrophe.
    pub fn name(&self, l: Letter) -> String {
        if l.is_positive() {
            self.names[l.base()].clone()
        } else {
            format!("{}'", self.names[l.base()])
        }
    }

    /// Parses `name` or `name'` into a letter, if declared.
    pub fn parse_letter(&self, tok: &str) -> Option<Letter> {
        let (base, barred) = match tok.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (tok, false),
        };
        let i = self.names.iter().position(|n| n == base)?;
        let l = self.letter(i);
        Some(if barred { l.bar() } else { l })
    }

    pub fn base_names(&self) -> &[String] {
        &self.names
    }
}

/// A finite sequence of signed letters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn single(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The bar involution: reverse the sequence and bar each letter.
    pub fn bar(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.bar()).collect())
    }

    /// Concatenation, no reduction applied.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The unique freely reduced word equal to `self` in the free group.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if stack.last() == Some(&l.bar()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word(stack)
    }

    /// True when no adjacent pair cancels.
    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].bar())
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().copied()
    }

    pub fn display(&self, alphabet: &InvolutiveAlphabet) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&l| alphabet.name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A permutation of `S ∪ S̄` commuting with the bar involution, i.e. an
/// automorphism of the free group preserving the signed letter set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedPermutation {
    image: Vec<Letter>,
}

impl SignedPermutation {
    /// Builds a signed permutation from the full image table on `S ∪ S̄`.
    /// Panics unless the table is a bijection commuting with the involution.
    pub fn new(image: Vec<Letter>) -> Self {
        let n = image.len();
        assert!(n % 2 == 0, "image table must cover S ∪ S̄");
        let mut seen = vec![false; n];
        for (i, l) in image.iter().enumerate() {
            assert!(l.index() < n, "letter out of range");
            assert!(!seen[l.index()], "image table is not injective");
            seen[l.index()] = true;
            let mate = image[Letter(i as u32).bar().index()];
            assert_eq!(mate, l.bar(), "image does not commute with the involution");
        }
        SignedPermutation { image }
    }

    /// Builds from images of the positive letters only.
    pub fn from_base_images(n: usize, base_images: &[Letter]) -> Self {
        assert_eq!(base_images.len(), n);
        let mut image = vec![Letter(0); 2 * n];
        for (i, &l) in base_images.iter().enumerate() {
            image[2 * i] = l;
            image[2 * i + 1] = l.bar();
        }
        SignedPermutation::new(image)
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            image: (0..2 * n as u32).map(Letter).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.image.len() / 2
    }

    #[inline]
    pub fn apply(&self, l: Letter) -> Letter {
        self.image[l.index()]
    }

    /// Letterwise image of a word. Length is preserved.
    pub fn apply_word(&self, w: &Word) -> Word {
        Word(w.0.iter().map(|&l| self.apply(l)).collect())
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        SignedPermutation {
            image: other.image.iter().map(|&l| self.apply(l)).collect(),
        }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut image = vec![Letter(0); self.image.len()];
        for (i, l) in self.image.iter().enumerate() {
            image[l.index()] = Letter(i as u32);
        }
        SignedPermutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, l)| l.index() == i)
    }

    /// No letter is sent to its own bar.
    pub fn has_no_inversion(&self) -> bool {
        self.image
            .iter()
            .enumerate()
            .all(|(i, &l)| l != Letter(i as u32).bar())
    }

    /// The letters fixed by this permutation, in canonical order.
    pub fn fixed_letters(&self) -> Vec<Letter> {
        self.image
            .iter()
            .enumerate()
            .filter(|&(i, &l)| l.index() == i)
            .map(|(i, _)| Letter(i as u32))
            .collect()
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm{:?}", self.image)
    }
}

/// The subgroup of `Aut(S±)` generated by `generators`, as a deduplicated,
/// canonically ordered list. Always contains the identity.
pub fn closure(n: usize, generators: &[SignedPermutation]) -> Vec<SignedPermutation> {
    let mut set: BTreeSet<SignedPermutation> = BTreeSet::new();
    set.insert(SignedPermutation::identity(n));
    for g in generators {
        assert_eq!(g.degree(), n);
        set.insert(g.clone());
        set.insert(g.inverse());
    }
    loop {
        let snapshot: Vec<_> = set.iter().cloned().collect();
        let before = set.len();
        for a in &snapshot {
            for b in &snapshot {
                set.insert(a.compose(b));
            }
        }
        if set.len() == before {
            break;
        }
    }
    set.into_iter().collect()
}

/// Output of [`remove_inversions`].
pub struct InversionFreeEmbedding {
    /// The doubled alphabet `S' = {u_1, v_1, …, u_n, v_n}`.
    pub alphabet: InvolutiveAlphabet,
    /// Image of each positive letter `s_i` of `S` as a word over `S'±`.
    pub embed: Vec<Word>,
    /// The transported automorphisms, in the same order as the input.
    pub perms: Vec<SignedPermutation>,
}

impl InversionFreeEmbedding {
    /// Letterwise extension of the embedding to arbitrary words.
    pub fn embed_word(&self, w: &Word) -> Word {
        let mut out = Vec::with_capacity(2 * w.len());
        for l in w.iter() {
            let img = &self.embed[l.base()];
            if l.is_positive() {
                out.extend(img.iter());
            } else {
                out.extend(img.bar().iter());
            }
        }
        Word(out)
    }
}

/// Doubles the alphabet so that a group of signed permutations acts without
/// inversion: `s_i ↦ u_i v̄_i`, and a permutation sending `s_i ↦ s_j` carries
/// `u_i ↦ u_j, v_i ↦ v_j`, while one sending `s_i ↦ s̄_j` carries
/// `u_i ↦ v_j, v_i ↦ u_j`. The transported map is a group isomorphism onto
/// its image and intertwines the embedding: `embed(φ(w))` freely reduces to
/// `φ'(embed(w))`.
pub fn remove_inversions(
    alphabet: &InvolutiveAlphabet,
    perms: &[SignedPermutation],
) -> InversionFreeEmbedding {
    let n = alphabet.size();
    let mut names = Vec::with_capacity(2 * n);
    for base in alphabet.base_names() {
        names.push(format!("{base}_u"));
        names.push(format!("{base}_v"));
    }
    let doubled = InvolutiveAlphabet::new(names);
    // u_i = letter 2i of S', v_i = letter 2i+1 of S'.
    let u = |i: usize| doubled.letter(2 * i);
    let v = |i: usize| doubled.letter(2 * i + 1);
    let embed: Vec<Word> = (0..n).map(|i| Word(vec![u(i), v(i).bar()])).collect();

    let transported = perms
        .iter()
        .map(|p| {
            assert_eq!(p.degree(), n);
            let mut base_images = vec![Letter(0); 2 * n];
            for i in 0..n {
                let img = p.apply(alphabet.letter(i));
                let j = img.base();
                if img.is_positive() {
                    base_images[2 * i] = u(j);
                    base_images[2 * i + 1] = v(j);
                } else {
                    base_images[2 * i] = v(j);
                    base_images[2 * i + 1] = u(j);
                }
            }
            SignedPermutation::from_base_images(2 * n, &base_images)
        })
        .collect();

    InversionFreeEmbedding {
        alphabet: doubled,
        embed,
        perms: transported,
    }
}
