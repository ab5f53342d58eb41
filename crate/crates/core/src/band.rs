//! Band complexes with twisting automorphisms and standard-form constraints,
//! their construction from triangular twisted systems, and solution checking.
//!
//! A complex is a disjoint union of segment components plus bands gluing two
//! base spans, each band carrying a basis-permuting twist. The construction
//! from a twisted system branches over the singular variable subset, the
//! cancellation combinatorics of every triangular equation (one of four
//! types), and the exact monoid value of every elementary segment; the
//! branches partition the solution set.

use std::collections::HashMap;
use std::sync::Arc;

use crate::automaton::Automaton;
use crate::error::Error;
use crate::monoid::{ConstraintMonoid, DivisorTables, ElemId, DEFAULT_ELEMENT_CAP};
use crate::words::{closure, InvolutiveAlphabet, SignedPermutation, Word};

/// One band: two base spans given by vertex indices on their components, an
/// orientation flag, and a twisting automorphism (an index into the monoid's
/// automorphism list). Walking the band from base0 (read `lo0 → hi0`) lands
/// on base1 read `lo1 → hi1` when preserving and `hi1 → lo1` when reversing;
/// the labels satisfy `σ(J1) = φ(σ(J0))`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Band {
    pub c0: usize,
    pub lo0: usize,
    pub hi0: usize,
    pub c1: usize,
    pub lo1: usize,
    pub hi1: usize,
    pub reversing: bool,
    pub twist: usize,
}

/// A band complex with rational constraints in standard form.
#[derive(Clone)]
pub struct BandComplex {
    pub monoid: Arc<ConstraintMonoid>,
    /// Number of elementary segments per domain component (each ≥ 1).
    pub comp_segs: Vec<usize>,
    pub bands: Vec<Band>,
    /// Monoid value of each forward elementary segment, per component.
    pub constraint: Vec<Vec<ElemId>>,
}

impl BandComplex {
    pub fn validate(&self) -> Result<(), Error> {
        if self.constraint.len() != self.comp_segs.len() {
            return Err(Error::Validation("constraint/component mismatch".into()));
        }
        for (c, &segs) in self.comp_segs.iter().enumerate() {
            if segs == 0 {
                return Err(Error::Validation(format!("component {c} is degenerate")));
            }
            if self.constraint[c].len() != segs {
                return Err(Error::Validation(format!("component {c} constraint arity")));
            }
        }
        for (i, b) in self.bands.iter().enumerate() {
            let ok = b.c0 < self.comp_segs.len()
                && b.c1 < self.comp_segs.len()
                && b.lo0 < b.hi0
                && b.hi0 <= self.comp_segs[b.c0]
                && b.lo1 < b.hi1
                && b.hi1 <= self.comp_segs[b.c1]
                && b.twist < self.monoid.perms().len();
            if !ok {
                return Err(Error::Validation(format!("band {i} is malformed")));
            }
        }
        Ok(())
    }

    pub fn n_comps(&self) -> usize {
        self.comp_segs.len()
    }

    /// Monoid value of the span `[from_v, to_v]` of vertices on `comp`,
    /// traversed forward when `from_v < to_v` and backward otherwise.
    pub fn span_value(&self, comp: usize, from_v: usize, to_v: usize) -> ElemId {
        assert_ne!(from_v, to_v);
        if from_v < to_v {
            let mut acc = self.constraint[comp][from_v];
            for i in from_v + 1..to_v {
                acc = self.monoid.mul(acc, self.constraint[comp][i]);
            }
            acc
        } else {
            self.monoid.inv(self.span_value(comp, to_v, from_v))
        }
    }

    /// Checks the shape needed by the periodicity bound: every component has
    /// at most one interior vertex, and carries at most two band bases that
    /// are proper subsegments of it.
    pub fn check_bound_shape(&self) -> Result<(), Error> {
        for (c, &segs) in self.comp_segs.iter().enumerate() {
            if segs > 2 {
                return Err(Error::Shape(format!(
                    "component {c} has {} interior vertices",
                    segs - 1
                )));
            }
            let proper = self
                .bands
                .iter()
                .flat_map(|b| {
                    [(b.c0, b.lo0, b.hi0), (b.c1, b.lo1, b.hi1)]
                })
                .filter(|&(bc, lo, hi)| bc == c && !(lo == 0 && hi == segs))
                .count();
            if proper > 2 {
                return Err(Error::Shape(format!(
                    "component {c} carries {proper} proper bases"
                )));
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for BandComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BandComplex(comps={:?}, bands={}, m={:?})",
            self.comp_segs,
            self.bands.len(),
            self.constraint
        )
    }
}

/// A labelling of the elementary segments by non-empty words. Backward labels
/// are stored explicitly so that involution violations can be detected when a
/// labelling is assembled by hand; [`Labelling::new`] fills them coherently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labelling {
    pub forward: Vec<Vec<Word>>,
    pub backward: Vec<Vec<Word>>,
}

impl Labelling {
    pub fn new(forward: Vec<Vec<Word>>) -> Self {
        let backward = forward
            .iter()
            .map(|c| c.iter().map(|w| w.bar()).collect())
            .collect();
        Labelling { forward, backward }
    }

    /// Word read along the vertex span `[from_v, to_v]`.
    pub fn span_word(&self, comp: usize, from_v: usize, to_v: usize) -> Word {
        let mut out = Vec::new();
        if from_v < to_v {
            for i in from_v..to_v {
                out.extend(self.forward[comp][i].iter());
            }
        } else {
            for i in (to_v..from_v).rev() {
                out.extend(self.backward[comp][i].iter());
            }
        }
        Word(out)
    }

    /// Total length over components (one orientation each).
    pub fn total_len(&self) -> usize {
        self.forward.iter().map(|c| c.iter().map(Word::len).sum::<usize>()).sum()
    }
}

/// Outcome of [`verify_solution`]: all violations, with locations.
#[derive(Debug, Clone)]
pub struct SolutionReport {
    pub violations: Vec<String>,
    pub total_len: usize,
}

impl SolutionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks band equalities, involution coherence, constraint membership and
/// reducedness of a labelling against a band complex.
pub fn verify_solution(sigma: &BandComplex, lab: &Labelling) -> SolutionReport {
    let mut violations = Vec::new();
    if lab.forward.len() != sigma.comp_segs.len() {
        violations.push("labelling does not cover the domain".into());
        return SolutionReport { violations, total_len: 0 };
    }
    for (c, &segs) in sigma.comp_segs.iter().enumerate() {
        if lab.forward[c].len() != segs || lab.backward[c].len() != segs {
            violations.push(format!("component {c}: wrong number of segment labels"));
            return SolutionReport { violations, total_len: 0 };
        }
    }
    for (c, labels) in lab.forward.iter().enumerate() {
        // involution coherence
        for (i, w) in labels.iter().enumerate() {
            if lab.backward[c][i] != w.bar() {
                violations.push(format!("involution violated on segment ({c},{i})"));
            }
        }
        // non-empty labels and reduced adapted segments: the full component
        // word being reduced covers every adapted subsegment
        for (i, w) in labels.iter().enumerate() {
            if w.is_empty() {
                violations.push(format!("empty label on segment ({c},{i})"));
            }
        }
        let full = lab.span_word(c, 0, sigma.comp_segs[c]);
        if !full.is_reduced() {
            violations.push(format!("component {c} label is not reduced"));
        }
        // constraints
        for (i, w) in labels.iter().enumerate() {
            if w.is_empty() {
                continue;
            }
            let got = sigma.monoid.eval(w).expect("non-empty");
            if got != sigma.constraint[c][i] {
                violations.push(format!(
                    "constraint violated on segment ({c},{i}): expected {:?}, got {got:?}",
                    sigma.constraint[c][i]
                ));
            }
        }
    }
    // band equalities
    for (bi, b) in sigma.bands.iter().enumerate() {
        let j0 = lab.span_word(b.c0, b.lo0, b.hi0);
        let j1 = if b.reversing {
            lab.span_word(b.c1, b.hi1, b.lo1)
        } else {
            lab.span_word(b.c1, b.lo1, b.hi1)
        };
        let twisted = sigma.monoid.perms()[b.twist].apply_word(&j0);
        if j1 != twisted {
            violations.push(format!("band {bi} equality fails"));
        }
    }
    SolutionReport { violations, total_len: lab.total_len() }
}

/// One term `φ(z)` of a twisted equation; `barred` means `z = x̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub perm: usize,
    pub var: usize,
    pub barred: bool,
}

/// A triangular system of twisted equations with rational constraints over a
/// free group, with a fixed inversion-free twisting group.
#[derive(Clone, Debug)]
pub struct TwistedSystem {
    pub alphabet: InvolutiveAlphabet,
    /// Closed twisting group in canonical order; indices are `Term::perm`.
    pub perms: Vec<SignedPermutation>,
    pub variables: Vec<String>,
    /// One automaton per variable (over `S±`); unconstrained is `all_words`.
    pub constraints: Vec<Automaton>,
    pub equations: Vec<[Term; 3]>,
}

impl TwistedSystem {
    pub fn new(
        alphabet: InvolutiveAlphabet,
        generators: &[SignedPermutation],
        variables: Vec<String>,
        constraints: Vec<Automaton>,
        equations: Vec<[(SignedPermutation, usize, bool); 3]>,
    ) -> Result<TwistedSystem, Error> {
        let n = alphabet.size();
        let mut gens = generators.to_vec();
        for eq in &equations {
            for (p, _, _) in eq {
                gens.push(p.clone());
            }
        }
        let perms = closure(n, &gens);
        for p in &perms {
            if !p.has_no_inversion() {
                return Err(Error::Validation(
                    "twisting group has an inversion; apply the doubling embedding first".into(),
                ));
            }
        }
        assert_eq!(constraints.len(), variables.len());
        let equations = equations
            .into_iter()
            .map(|eq| {
                eq.map(|(p, var, barred)| Term {
                    perm: perms.iter().position(|q| *q == p).expect("closure contains twist"),
                    var,
                    barred,
                })
            })
            .collect();
        Ok(TwistedSystem { alphabet, perms, variables, constraints, equations })
    }

    pub fn n_letters(&self) -> usize {
        self.alphabet.signed_size()
    }

    /// Precomputes the reduced constraint languages for repeated membership
    /// checks; the oracle path calls this once.
    pub fn checker(&self) -> SolutionChecker<'_> {
        SolutionChecker {
            system: self,
            reduced: self.constraints.iter().map(Automaton::reduced_language).collect(),
        }
    }

    /// Checks a candidate assignment of words to variables against the
    /// equations and constraints. Test/oracle helper.
    pub fn is_solution(&self, values: &[Word]) -> bool {
        self.checker().is_solution(values)
    }
}

/// Membership checker with cached reduced constraint automata.
pub struct SolutionChecker<'a> {
    system: &'a TwistedSystem,
    reduced: Vec<Automaton>,
}

impl SolutionChecker<'_> {
    pub fn is_solution(&self, values: &[Word]) -> bool {
        let t = self.system;
        assert_eq!(values.len(), t.variables.len());
        for (x, v) in values.iter().enumerate() {
            if !self.reduced[x].accepts(&v.free_reduce()) {
                return false;
            }
        }
        for eq in &t.equations {
            let mut acc = Word::empty();
            for term in eq {
                let mut v = values[term.var].clone();
                if term.barred {
                    v = v.bar();
                }
                acc = acc.concat(&t.perms[term.perm].apply_word(&v));
            }
            if !acc.free_reduce().is_empty() {
                return false;
            }
        }
        true
    }
}

/// Where the pieces of one (possibly singular-reduced) equation live.
#[derive(Clone, Debug)]
pub enum EqLayout {
    /// A full triangular equation with its cancellation type: `kappa = 0` is
    /// the non-degenerate tripod, `kappa = j + 1` the flat tripod with centre
    /// at corner `j`.
    Triple { terms: [Term; 3], comps: [usize; 3], kappa: u8 },
    /// A twisted equality `u₀ = u₁` (the second term's bar already folded in).
    Pair { terms: [Term; 2], comps: [usize; 2] },
}

/// One branch of the construction: a band complex together with the data
/// linking it back to the twisted system.
#[derive(Clone, Debug)]
pub struct ProducedComplex {
    pub complex: BandComplex,
    /// Per twisted-system variable: true when forced to the identity.
    pub singular: Vec<bool>,
    /// Per surviving variable: its domain component.
    pub var_comp: Vec<Option<usize>>,
    pub layouts: Vec<EqLayout>,
}

/// Builds the monoid in standard form for a twisted system: the reduced
/// language of every variable constraint, plus `Fix φ` for every twist.
pub fn standard_form_monoid(
    t: &TwistedSystem,
    cap: usize,
) -> Result<Arc<ConstraintMonoid>, Error> {
    let n_letters = t.n_letters();
    let langs: Vec<(String, Automaton)> = t
        .constraints
        .iter()
        .enumerate()
        .map(|(i, a)| (format!("var:{i}"), a.reduced_language()))
        .collect();
    let monoid = ConstraintMonoid::build(n_letters, &langs, &t.perms, cap)?;
    Ok(Arc::new(monoid))
}

/// Constructs the finite family of band complexes whose reduced solutions
/// partition the solutions of the twisted system. `max_outputs` bounds the
/// enumeration; hitting it sets the truncation flag.
pub fn build_band_complexes(
    t: &TwistedSystem,
    monoid_cap: usize,
    max_outputs: usize,
) -> Result<(Arc<ConstraintMonoid>, Vec<ProducedComplex>, bool), Error> {
    let monoid = standard_form_monoid(t, monoid_cap)?;
    if monoid.len() > 2_048 {
        return Err(Error::Explosion { cap: 2_048 });
    }
    let div = DivisorTables::build(&monoid);
    let nvars = t.variables.len();
    let identity_ok: Vec<bool> = t
        .constraints
        .iter()
        .map(|a| a.contains_group_identity())
        .collect();
    let var_designated: Vec<Vec<ElemId>> = (0..nvars)
        .map(|i| monoid.designated_set(&format!("var:{i}")).expect("named language"))
        .collect();

    let mut out: Vec<ProducedComplex> = Vec::new();
    let mut truncated = false;

    // Singular subsets, most-singular first so cheap solutions surface early.
    let mut masks: Vec<u64> = (0..(1u64 << nvars)).collect();
    masks.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));

    'mask: for mask in masks {
        let singular: Vec<bool> = (0..nvars).map(|i| mask >> i & 1 == 1).collect();
        for (i, &s) in singular.iter().enumerate() {
            if s && !identity_ok[i] {
                continue 'mask;
            }
        }
        // substitute: drop singular terms
        let mut triples: Vec<[Term; 3]> = Vec::new();
        let mut pairs: Vec<[Term; 2]> = Vec::new();
        for eq in &t.equations {
            let live: Vec<Term> =
                eq.iter().copied().filter(|t| !singular[t.var]).collect();
            match live.len() {
                0 => {}
                1 => continue 'mask, // φ(x) = 1 with x non-singular: no solutions
                2 => {
                    // φ₀(z₀)·φ₁(z₁) = 1 becomes the equality φ₀(z₀) = φ₁(z̄₁)
                    let mut b = live[1];
                    b.barred = !b.barred;
                    pairs.push([live[0], b]);
                }
                3 => triples.push([live[0], live[1], live[2]]),
                _ => unreachable!(),
            }
        }

        // components: surviving variables first, in order
        let mut var_comp: Vec<Option<usize>> = vec![None; nvars];
        let mut n_comps = 0;
        for (i, s) in singular.iter().enumerate() {
            if !s {
                var_comp[i] = Some(n_comps);
                n_comps += 1;
            }
        }

        // cancellation combinatorics per triple
        let mut kappas = vec![0u8; triples.len()];
        loop {
            emit_for_kappa(
                t,
                &monoid,
                &div,
                &singular,
                &var_comp,
                n_comps,
                &triples,
                &pairs,
                &kappas,
                &var_designated,
                &mut out,
                max_outputs,
                &mut truncated,
            );
            if truncated {
                return Ok((monoid, out, true));
            }
            // next kappa vector
            let mut i = 0;
            loop {
                if i == kappas.len() {
                    break;
                }
                kappas[i] += 1;
                if kappas[i] < 4 {
                    break;
                }
                kappas[i] = 0;
                i += 1;
            }
            if i == kappas.len() {
                break;
            }
        }
    }
    Ok((monoid, out, false))
}

#[allow(clippy::too_many_arguments)]
fn emit_for_kappa(
    t: &TwistedSystem,
    monoid: &Arc<ConstraintMonoid>,
    div: &DivisorTables,
    singular: &[bool],
    var_comp: &[Option<usize>],
    n_var_comps: usize,
    triples: &[[Term; 3]],
    pairs: &[[Term; 2]],
    kappas: &[u8],
    var_designated: &[Vec<ElemId>],
    out: &mut Vec<ProducedComplex>,
    max_outputs: usize,
    truncated: &mut bool,
) {
    // Lay out equation components and their segment counts.
    let mut comp_segs: Vec<usize> = vec![1; n_var_comps];
    let mut layouts: Vec<EqLayout> = Vec::new();
    for (e, triple) in triples.iter().enumerate() {
        let kappa = kappas[e];
        let mut comps = [0usize; 3];
        for (i, c) in comps.iter_mut().enumerate() {
            *c = comp_segs.len();
            // non-degenerate: every side splits; flat at corner j: only side
            // j+1 splits
            let split = kappa == 0 || (kappa as usize - 1 + 1) % 3 == i;
            comp_segs.push(if split { 2 } else { 1 });
        }
        layouts.push(EqLayout::Triple { terms: *triple, comps, kappa });
    }
    for pair in pairs {
        let c0 = comp_segs.len();
        comp_segs.push(1);
        let c1 = comp_segs.len();
        comp_segs.push(1);
        layouts.push(EqLayout::Pair { terms: *pair, comps: [c0, c1] });
    }

    // Bands, in canonical order: variable bands then internal bands.
    let mut bands: Vec<Band> = Vec::new();
    for layout in &layouts {
        let (terms, comps): (&[Term], &[usize]) = match layout {
            EqLayout::Triple { terms, comps, .. } => (terms, comps),
            EqLayout::Pair { terms, comps } => (terms, comps),
        };
        for (i, term) in terms.iter().enumerate() {
            let vc = var_comp[term.var].expect("live term");
            bands.push(Band {
                c0: vc,
                lo0: 0,
                hi0: 1,
                c1: comps[i],
                lo1: 0,
                hi1: comp_segs[comps[i]],
                reversing: term.barred,
                twist: term.perm,
            });
        }
    }
    let id_perm = monoid.identity_perm();
    for layout in &layouts {
        match layout {
            EqLayout::Triple { comps, kappa, .. } => {
                if *kappa == 0 {
                    // right half of side i glued to left half of side i+1
                    for i in 0..3 {
                        bands.push(Band {
                            c0: comps[i],
                            lo0: 1,
                            hi0: 2,
                            c1: comps[(i + 1) % 3],
                            lo1: 0,
                            hi1: 1,
                            reversing: true,
                            twist: id_perm,
                        });
                    }
                } else {
                    let j = (*kappa - 1) as usize;
                    let split = (j + 1) % 3;
                    // whole side j glued to the initial half of side j+1,
                    // whole side j-1 glued to its final half
                    bands.push(Band {
                        c0: comps[j],
                        lo0: 0,
                        hi0: 1,
                        c1: comps[split],
                        lo1: 0,
                        hi1: 1,
                        reversing: true,
                        twist: id_perm,
                    });
                    bands.push(Band {
                        c0: comps[(j + 2) % 3],
                        lo0: 0,
                        hi0: 1,
                        c1: comps[split],
                        lo1: 1,
                        hi1: 2,
                        reversing: true,
                        twist: id_perm,
                    });
                }
            }
            EqLayout::Pair { comps, .. } => {
                bands.push(Band {
                    c0: comps[0],
                    lo0: 0,
                    hi0: 1,
                    c1: comps[1],
                    lo1: 0,
                    hi1: 1,
                    reversing: false,
                    twist: id_perm,
                });
            }
        }
    }

    // Enumerate constraint tuples: first a designated value per variable
    // component, then the factorisation choices per equation.
    let live_vars: Vec<usize> =
        (0..singular.len()).filter(|&i| !singular[i]).collect();

    // per-equation enumeration given variable values
    #[derive(Clone)]
    struct EqChoice {
        // segment values of the equation's components, matching comp_segs
        seg_values: Vec<Vec<ElemId>>,
    }

    fn term_value(
        monoid: &ConstraintMonoid,
        values: &HashMap<usize, ElemId>,
        term: &Term,
    ) -> ElemId {
        let v = values[&term.var];
        let v = if term.barred { monoid.inv(v) } else { v };
        monoid.act(term.perm, v)
    }

    let eq_choices = |values: &HashMap<usize, ElemId>| -> Vec<Vec<EqChoice>> {
        let mut all = Vec::with_capacity(layouts.len());
        for layout in &layouts {
            match layout {
                EqLayout::Pair { terms, .. } => {
                    let p0 = term_value(monoid, values, &terms[0]);
                    let p1 = term_value(monoid, values, &terms[1]);
                    if p0 == p1 {
                        all.push(vec![EqChoice { seg_values: vec![vec![p0], vec![p1]] }]);
                    } else {
                        all.push(vec![]);
                    }
                }
                EqLayout::Triple { terms, kappa, .. } => {
                    let p: Vec<ElemId> =
                        terms.iter().map(|t| term_value(monoid, values, t)).collect();
                    let mut choices = Vec::new();
                    if *kappa == 0 {
                        // halves L_i · R_i = P_i with L_{i+1} = inv(R_i)
                        for &(l0, r0) in div.factorisations(p[0]) {
                            let l1 = monoid.inv(r0);
                            for &r1 in div.left_quotients(l1, p[1]) {
                                let l2 = monoid.inv(r1);
                                for &r2 in div.left_quotients(l2, p[2]) {
                                    if monoid.inv(r2) == l0 {
                                        choices.push(EqChoice {
                                            seg_values: vec![
                                                vec![l0, r0],
                                                vec![l1, r1],
                                                vec![l2, r2],
                                            ],
                                        });
                                    }
                                }
                            }
                        }
                    } else {
                        let j = (*kappa - 1) as usize;
                        let split = (j + 1) % 3;
                        let init = monoid.inv(p[j]);
                        let fin = monoid.inv(p[(j + 2) % 3]);
                        if monoid.mul(init, fin) == p[split] {
                            let seg_values = (0..3)
                                .map(|i| {
                                    if i == split {
                                        vec![init, fin]
                                    } else {
                                        vec![p[i]]
                                    }
                                })
                                .collect();
                            choices.push(EqChoice { seg_values });
                        }
                    }
                    all.push(choices);
                }
            }
        }
        all
    };

    // DFS over variable values, then the cartesian product of eq choices.
    let mut var_values: HashMap<usize, ElemId> = HashMap::new();
    let mut stack_emit =
        |values: &HashMap<usize, ElemId>, out: &mut Vec<ProducedComplex>, truncated: &mut bool| {
            let per_eq = eq_choices(values);
            if per_eq.iter().any(Vec::is_empty) && !layouts.is_empty() {
                return;
            }
            let mut idx = vec![0usize; per_eq.len()];
            loop {
                if out.len() >= max_outputs {
                    *truncated = true;
                    return;
                }
                // assemble constraints
                let mut constraint: Vec<Vec<ElemId>> =
                    comp_segs.iter().map(|&s| vec![ElemId(0); s]).collect();
                for (&i, &v) in values.iter() {
                    if let Some(c) = var_comp[i] {
                        constraint[c] = vec![v];
                    }
                }
                for (e, layout) in layouts.iter().enumerate() {
                    let comps: &[usize] = match layout {
                        EqLayout::Triple { comps, .. } => comps,
                        EqLayout::Pair { comps, .. } => comps,
                    };
                    let choice = &per_eq[e][idx[e]];
                    for (k, &c) in comps.iter().enumerate() {
                        constraint[c] = choice.seg_values[k].clone();
                    }
                }
                let complex = BandComplex {
                    monoid: Arc::clone(monoid),
                    comp_segs: comp_segs.clone(),
                    bands: bands.clone(),
                    constraint,
                };
                debug_assert!(complex.validate().is_ok());
                debug_assert!(complex.check_bound_shape().is_ok());
                out.push(ProducedComplex {
                    complex,
                    singular: singular.to_vec(),
                    var_comp: var_comp.to_vec(),
                    layouts: layouts.clone(),
                });
                // advance
                let mut i = 0;
                loop {
                    if i == idx.len() {
                        return;
                    }
                    idx[i] += 1;
                    if idx[i] < per_eq[i].len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if idx.iter().all(|&x| x == 0) {
                    return;
                }
            }
        };

    fn assign_vars(
        k: usize,
        live: &[usize],
        designated: &[Vec<ElemId>],
        values: &mut HashMap<usize, ElemId>,
        emit: &mut dyn FnMut(&HashMap<usize, ElemId>),
    ) {
        if k == live.len() {
            emit(values);
            return;
        }
        let var = live[k];
        for &m in &designated[var] {
            values.insert(var, m);
            assign_vars(k + 1, live, designated, values, emit);
        }
        values.remove(&var);
    }

    let mut emit = |values: &HashMap<usize, ElemId>| {
        if !*truncated {
            stack_emit(values, out, truncated);
        }
    };
    assign_vars(0, &live_vars, var_designated, &mut var_values, &mut emit);
}

/// Attempts to realise a variable assignment as a labelling of one produced
/// complex. Returns `None` when the support or the cancellation combinatorics
/// do not match this branch; a `Some` result still needs [`verify_solution`]
/// (the constraint tuple may differ).
pub fn labelling_for_solution(
    t: &TwistedSystem,
    produced: &ProducedComplex,
    values: &[Word],
) -> Option<Labelling> {
    let reduced: Vec<Word> = values.iter().map(Word::free_reduce).collect();
    for (i, w) in reduced.iter().enumerate() {
        if produced.singular[i] != w.is_empty() {
            return None;
        }
    }
    let mut forward: Vec<Vec<Word>> =
        produced.complex.comp_segs.iter().map(|&s| vec![Word::empty(); s]).collect();
    for (i, w) in reduced.iter().enumerate() {
        if let Some(c) = produced.var_comp[i] {
            forward[c] = vec![w.clone()];
        }
    }
    let term_word = |term: &Term| -> Word {
        let mut w = reduced[term.var].clone();
        if term.barred {
            w = w.bar();
        }
        t.perms[term.perm].apply_word(&w)
    };
    for layout in &produced.layouts {
        match layout {
            EqLayout::Pair { terms, comps } => {
                for (i, term) in terms.iter().enumerate() {
                    forward[comps[i]] = vec![term_word(term)];
                }
            }
            EqLayout::Triple { terms, comps, kappa } => {
                let u: Vec<Word> = terms.iter().map(term_word).collect();
                // tripod arm lengths: x_i = distance from corner i to centre
                let l: Vec<i64> = u.iter().map(|w| w.len() as i64).collect();
                let x = [
                    (l[0] - l[1] + l[2]) / 2,
                    (l[1] - l[2] + l[0]) / 2,
                    (l[2] - l[0] + l[1]) / 2,
                ];
                if (l[0] - l[1] + l[2]) % 2 != 0 || x.iter().any(|&v| v < 0) {
                    return None;
                }
                // side i runs from corner i to corner i+1: split at x_i
                let split_of = |i: usize| x[i] as usize;
                if *kappa == 0 {
                    if x.iter().any(|&v| v == 0) {
                        return None;
                    }
                    for i in 0..3 {
                        let s = split_of(i);
                        let w = &u[i];
                        forward[comps[i]] = vec![
                            Word(w.0[..s].to_vec()),
                            Word(w.0[s..].to_vec()),
                        ];
                    }
                } else {
                    let j = (*kappa - 1) as usize;
                    if x[j] != 0 || x[(j + 1) % 3] == 0 || x[(j + 2) % 3] == 0 {
                        return None;
                    }
                    let split = (j + 1) % 3;
                    for i in 0..3 {
                        let w = &u[i];
                        if i == split {
                            let s = split_of(i) as usize;
                            forward[comps[i]] = vec![
                                Word(w.0[..s].to_vec()),
                                Word(w.0[s..].to_vec()),
                            ];
                        } else {
                            forward[comps[i]] = vec![w.clone()];
                        }
                    }
                }
            }
        }
    }
    if forward.iter().flatten().any(Word::is_empty) {
        return None;
    }
    Some(Labelling::new(forward))
}

/// Reads the variable words off a labelling of a produced complex.
pub fn solution_words(produced: &ProducedComplex, lab: &Labelling) -> Vec<Word> {
    produced
        .var_comp
        .iter()
        .map(|c| match c {
            Some(c) => lab.span_word(*c, 0, produced.complex.comp_segs[*c]),
            None => Word::empty(),
        })
        .collect()
}

/// Default caps used by the solver when constructing complexes.
pub const DEFAULT_MONOID_CAP: usize = DEFAULT_ELEMENT_CAP;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Letter;

    fn ab() -> InvolutiveAlphabet {
        InvolutiveAlphabet::new(vec!["a".into(), "b".into()])
    }

    fn w(al: &InvolutiveAlphabet, s: &str) -> Word {
        if s == "1" {
            return Word::empty();
        }
        s.split_whitespace().map(|t| al.parse_letter(t).unwrap()).collect()
    }

    /// x a x̄ b̄ = 1 as a triangular system: ȳ x c_a = 1, y x̄ c̄_b = 1.
    fn conjugacy_system(rhs: &str) -> TwistedSystem {
        let al = ab();
        let id = SignedPermutation::identity(2);
        let ca = Automaton::single_word(4, &w(&al, "a"));
        let cb = Automaton::single_word(4, &w(&al, rhs));
        let all = Automaton::all_words(4);
        TwistedSystem::new(
            al,
            &[],
            vec!["x".into(), "y".into(), "ca".into(), "cb".into()],
            vec![all.clone(), all, ca, cb],
            vec![
                [(id.clone(), 1, true), (id.clone(), 0, false), (id.clone(), 2, false)],
                [(id.clone(), 1, false), (id.clone(), 0, true), (id.clone(), 3, true)],
            ],
        )
        .unwrap()
    }

    /// x·x·ā = 1.
    fn square_system() -> TwistedSystem {
        let al = ab();
        let id = SignedPermutation::identity(2);
        let ca = Automaton::single_word(4, &w(&al, "a"));
        let all = Automaton::all_words(4);
        TwistedSystem::new(
            al,
            &[],
            vec!["x".into(), "ca".into()],
            vec![all, ca],
            vec![[(id.clone(), 0, false), (id.clone(), 0, false), (id, 1, true)]],
        )
        .unwrap()
    }

    fn reduced_words_upto(n_letters: usize, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut frontier = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for word in &frontier {
                for l in 0..n_letters {
                    let letter = Letter(l as u32);
                    if word.0.last() != Some(&letter.bar()) {
                        let mut v = word.clone();
                        v.0.push(letter);
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    fn oracle_solutions(t: &TwistedSystem, max_len: usize) -> Vec<Vec<Word>> {
        let words = reduced_words_upto(t.n_letters(), max_len);
        let checker = t.checker();
        let mut out = Vec::new();
        let n = t.variables.len();
        let mut idx = vec![0usize; n];
        loop {
            let tuple: Vec<Word> = idx.iter().map(|&i| words[i].clone()).collect();
            if checker.is_solution(&tuple) {
                out.push(tuple);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                idx[i] += 1;
                if idx[i] < words.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn identity_band_accepts_single_letter() {
        let al = ab();
        let id = SignedPermutation::identity(2);
        let langs = vec![("all".to_string(), Automaton::nonempty_reduced_words(4))];
        let monoid =
            Arc::new(ConstraintMonoid::build(4, &langs, &[id], DEFAULT_ELEMENT_CAP).unwrap());
        let ra = monoid.eval(&w(&al, "a")).unwrap();
        let complex = BandComplex {
            monoid: Arc::clone(&monoid),
            comp_segs: vec![1, 1],
            bands: vec![Band { c0: 0, lo0: 0, hi0: 1, c1: 1, lo1: 0, hi1: 1, reversing: false, twist: monoid.identity_perm() }],
            constraint: vec![vec![ra], vec![ra]],
        };
        let lab = Labelling::new(vec![vec![w(&al, "a")], vec![w(&al, "a")]]);
        let report = verify_solution(&complex, &lab);
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(report.total_len, 2);
    }

    #[test]
    fn swap_twist_rejects_fixed_letter() {
        let al = ab();
        let swap = SignedPermutation::from_base_images(2, &[al.letter(1), al.letter(0)]);
        let group = closure(2, &[swap.clone()]);
        let langs = vec![("all".to_string(), Automaton::nonempty_reduced_words(4))];
        let monoid =
            Arc::new(ConstraintMonoid::build(4, &langs, &group, DEFAULT_ELEMENT_CAP).unwrap());
        let swap_idx = monoid.perm_index(&swap).unwrap();
        let ra = monoid.eval(&w(&al, "a")).unwrap();
        let complex = BandComplex {
            monoid: Arc::clone(&monoid),
            comp_segs: vec![1, 1],
            bands: vec![Band { c0: 0, lo0: 0, hi0: 1, c1: 1, lo1: 0, hi1: 1, reversing: false, twist: swap_idx }],
            constraint: vec![vec![ra], vec![ra]],
        };
        // band wants σ(J1) = swap(σ(J0)) = [b], but the label is [a]
        let lab = Labelling::new(vec![vec![w(&al, "a")], vec![w(&al, "a")]]);
        let report = verify_solution(&complex, &lab);
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("band")));
    }

    #[test]
    fn involution_violation_is_reported() {
        let al = ab();
        let id = SignedPermutation::identity(2);
        let langs = vec![("all".to_string(), Automaton::nonempty_reduced_words(4))];
        let monoid =
            Arc::new(ConstraintMonoid::build(4, &langs, &[id], DEFAULT_ELEMENT_CAP).unwrap());
        let ra = monoid.eval(&w(&al, "a")).unwrap();
        let complex = BandComplex {
            monoid,
            comp_segs: vec![1],
            bands: vec![],
            constraint: vec![vec![ra]],
        };
        let mut lab = Labelling::new(vec![vec![w(&al, "a")]]);
        lab.backward[0][0] = w(&al, "b"); // should be a'
        let report = verify_solution(&complex, &lab);
        assert!(report.violations.iter().any(|v| v.contains("involution")));
    }

    #[test]
    fn conjugate_of_a_by_x_solution_hits_exactly_one_branch() {
        let t = conjugacy_system("a");
        let (_m, produced, truncated) =
            build_band_complexes(&t, DEFAULT_MONOID_CAP, 500_000).unwrap();
        assert!(!truncated);
        let al = ab();
        // x = a, y = x·ca = a·a
        let solution = vec![w(&al, "a"), w(&al, "a a"), w(&al, "a"), w(&al, "a")];
        assert!(t.is_solution(&solution));
        let mut hits = 0;
        for p in &produced {
            if let Some(lab) = labelling_for_solution(&t, p, &solution) {
                if verify_solution(&p.complex, &lab).is_valid() {
                    hits += 1;
                    assert_eq!(solution_words(p, &lab), solution);
                }
            }
        }
        assert_eq!(hits, 1, "a solution must validate against exactly one branch");
    }

    #[test]
    fn partition_property_small_systems() {
        for t in [conjugacy_system("a"), square_system()] {
            let (_m, produced, truncated) =
                build_band_complexes(&t, DEFAULT_MONOID_CAP, 500_000).unwrap();
            assert!(!truncated);
            for sol in oracle_solutions(&t, 2) {
                let mut hits = 0;
                for p in &produced {
                    if let Some(lab) = labelling_for_solution(&t, p, &sol) {
                        if verify_solution(&p.complex, &lab).is_valid() {
                            hits += 1;
                        }
                    }
                }
                assert_eq!(hits, 1, "solution {sol:?} must land in exactly one branch");
            }
        }
    }

    #[test]
    fn no_small_labelling_for_nonconjugate_constants() {
        let t = conjugacy_system("b");
        let (_m, produced, truncated) =
            build_band_complexes(&t, DEFAULT_MONOID_CAP, 500_000).unwrap();
        assert!(!truncated);
        // brute force: no solution with |g_x| ≤ 4
        assert!(oracle_solutions(&t, 4).is_empty());
        let words = reduced_words_upto(4, 4);
        for p in &produced {
            for x in &words {
                for y in &words {
                    let cand = vec![x.clone(), y.clone(), w(&ab(), "a"), w(&ab(), "b")];
                    if let Some(lab) = labelling_for_solution(&t, p, &cand) {
                        assert!(
                            !verify_solution(&p.complex, &lab).is_valid(),
                            "phantom labelling for {cand:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn valid_labellings_map_back_to_oracle_solutions() {
        let t = square_system();
        let (_m, produced, _) = build_band_complexes(&t, DEFAULT_MONOID_CAP, 500_000).unwrap();
        let words = reduced_words_upto(4, 3);
        for p in &produced {
            for x in &words {
                let cand = vec![x.clone(), w(&ab(), "a")];
                if let Some(lab) = labelling_for_solution(&t, p, &cand) {
                    if verify_solution(&p.complex, &lab).is_valid() {
                        let back = solution_words(p, &lab);
                        assert!(t.is_solution(&back));
                        assert_eq!(&back, &cand);
                    }
                }
            }
        }
    }

    #[test]
    fn bound_shape_holds_on_produced_complexes() {
        let t = conjugacy_system("b");
        let (_m, produced, _) = build_band_complexes(&t, DEFAULT_MONOID_CAP, 500_000).unwrap();
        assert!(!produced.is_empty());
        for p in &produced {
            p.complex.check_bound_shape().unwrap();
            p.complex.validate().unwrap();
        }
    }
}
