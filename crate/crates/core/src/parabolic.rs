//! Character-level bookkeeping for parabolic and Whittaker categories:
//! pushforward and averaging of standard objects, the killing rule, and
//! decomposition multiplicities of pushforwards from the spherical module.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::coxeter::{ParabolicSubset, WeylElement, WeylGroup};
use crate::duality::BigradedDim;
use crate::error::{Error, Result};
use crate::hecke::{Flavor, KlBasis, ParabolicModule};

/// Which category a character describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharacterFlavor {
    Parabolic,
    Whittaker,
}

/// `!` or `*` pushforward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variance {
    #[serde(rename = "!")]
    Shriek,
    #[serde(rename = "*")]
    Star,
}

/// Shift `[shift]` and Tate twist `(twist_doubled / 2)` of a standard object.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Grading {
    pub shift: i32,
    pub twist_doubled: i32,
}

impl Grading {
    /// Position of `Q[shift](twist_doubled/2)` in a bigraded table.
    pub fn table(self) -> BigradedDim {
        BigradedDim::singleton(0, 0).shift(self.shift).twist(self.twist_doubled)
    }
}

/// Standard objects indexed by minimal coset representatives of
/// `W_Theta \ W`, each carrying its grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicCharacter {
    pub theta: ParabolicSubset,
    pub flavor: CharacterFlavor,
    support: BTreeMap<WeylElement, Grading>,
}

impl ParabolicCharacter {
    pub fn singleton(theta: ParabolicSubset, flavor: CharacterFlavor, coset: WeylElement, grading: Grading) -> Self {
        ParabolicCharacter { theta, flavor, support: BTreeMap::from([(coset, grading)]) }
    }

    pub fn support(&self) -> &BTreeMap<WeylElement, Grading> {
        &self.support
    }

    /// The only entry of a singleton character.
    pub fn single(&self) -> Option<(&WeylElement, Grading)> {
        let mut it = self.support.iter();
        let (x, g) = it.next()?;
        it.next().is_none().then_some((x, *g))
    }
}

#[derive(Serialize)]
struct CharacterEntry<'a> {
    coset: &'a [usize],
    shift: i32,
    twist_doubled: i32,
}

impl Serialize for ParabolicCharacter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            theta: &'a [usize],
            flavor: CharacterFlavor,
            support: SupportSeq<'a>,
        }
        struct SupportSeq<'a>(&'a BTreeMap<WeylElement, Grading>);
        impl Serialize for SupportSeq<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for (x, g) in self.0 {
                    seq.serialize_element(&CharacterEntry { coset: x.word(), shift: g.shift, twist_doubled: g.twist_doubled })?;
                }
                seq.end()
            }
        }
        Doc { theta: self.theta.generators(), flavor: self.flavor, support: SupportSeq(&self.support) }.serialize(serializer)
    }
}

fn require_finite(theta: &ParabolicSubset) -> Result<()> {
    if theta.finite_type() {
        Ok(())
    } else {
        Err(Error::NotFiniteType(theta.generators().to_vec()))
    }
}

/// Pushforward of the standard object at `w`: with `w = u v`, the standard
/// at the coset of `v` shifted and twisted by `-l(u)` (`!`) or `+l(u)` (`*`).
pub fn push_standard(
    group: &WeylGroup,
    w: &WeylElement,
    theta: &ParabolicSubset,
    variance: Variance,
) -> Result<ParabolicCharacter> {
    require_finite(theta)?;
    let (u, v) = group.factor_parabolic(w, theta);
    let l = u.length() as i32;
    let sign = match variance {
        Variance::Shriek => -1,
        Variance::Star => 1,
    };
    let grading = Grading { shift: sign * l, twist_doubled: sign * l };
    Ok(ParabolicCharacter::singleton(theta.clone(), CharacterFlavor::Parabolic, v, grading))
}

/// Whittaker averaging of the standard object at `w = u v`: the standard at
/// the coset of `v`, unshifted, twisted by `l(u)/2`.
pub fn average_standard(group: &WeylGroup, w: &WeylElement, theta: &ParabolicSubset) -> Result<ParabolicCharacter> {
    require_finite(theta)?;
    let (u, v) = group.factor_parabolic(w, theta);
    let grading = Grading { shift: 0, twist_doubled: u.length() as i32 };
    Ok(ParabolicCharacter::singleton(theta.clone(), CharacterFlavor::Whittaker, v, grading))
}

/// Whether averaging kills the simple object at `w`: true iff some element
/// of Theta is a left descent of `w`.
pub fn kill_nonminimal(group: &WeylGroup, w: &WeylElement, theta: &ParabolicSubset) -> bool {
    !group.is_minimal_left(w, theta)
}

/// One summand `IC_coset[shift](shift/2)` of a pushforward, with its
/// multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DecompTerm {
    pub coset: WeylElement,
    pub shift: i32,
    pub multiplicity: u64,
}

impl Serialize for DecompTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            coset: &'a [usize],
            shift: i32,
            multiplicity: u64,
        }
        Doc { coset: self.coset.word(), shift: self.shift, multiplicity: self.multiplicity }.serialize(serializer)
    }
}

/// Summands of the pushforward of `IC_w` to the partial flag variety, read
/// off from the expansion of `N_e b_w` in the self-dual basis of the
/// spherical module.
pub fn parabolic_decomp_multiplicities(kl: &Arc<KlBasis>, w: &WeylElement, theta: &ParabolicSubset) -> Result<Vec<DecompTerm>> {
    require_finite(theta)?;
    let group = kl.group();
    let module = ParabolicModule::new(kl.clone(), theta.clone(), Flavor::Spherical);
    let image = module.project(&kl.b(w));
    let mut out = Vec::new();
    for (x, p) in module.to_kl(&image) {
        for (n, c) in p.terms() {
            if c < 0 {
                return Err(Error::Invariant(format!("negative multiplicity {c} of {x}[{n}] in the pushforward of {w}")));
            }
            if (w.length() as i32 - x.length() as i32 - n).rem_euclid(2) != 0 {
                return Err(Error::Invariant(format!("shift {n} of {x} has the wrong parity for {w}")));
            }
            out.push(DecompTerm { coset: x.clone(), shift: n, multiplicity: c as u64 });
        }
    }
    if group.is_minimal_left(w, theta) {
        let top = out.iter().filter(|t| &t.coset == w && t.shift == 0).map(|t| t.multiplicity).sum::<u64>();
        if top != 1 {
            return Err(Error::Invariant(format!("{w} appears {top} times in its own pushforward")));
        }
    }
    out.sort();
    Ok(out)
}

/// The parabolic standard at a coset and the Whittaker standard it
/// corresponds to.
pub fn pw_match(
    group: &WeylGroup,
    coset: &WeylElement,
    theta: &ParabolicSubset,
) -> Result<(ParabolicCharacter, ParabolicCharacter)> {
    require_finite(theta)?;
    if !group.is_minimal_left(coset, theta) {
        return Err(Error::NotMinimal(coset.to_string()));
    }
    let parabolic = push_standard(group, coset, theta, Variance::Shriek)?;
    let whittaker = average_standard(group, coset, theta)?;
    Ok((parabolic, whittaker))
}

/// Standard flag of the Whittaker projective cover over Theta: the
/// standard at each `u` in `W_Theta`, twisted as by averaging.
pub fn projective_flag(group: &WeylGroup, theta: &ParabolicSubset) -> Result<Vec<(WeylElement, Grading)>> {
    require_finite(theta)?;
    group
        .parabolic_subgroup(theta)?
        .into_iter()
        .map(|u| {
            let avg = average_standard(group, &u, theta)?;
            let (_, grading) = avg.single().expect("averaging a standard gives one standard");
            Ok((u, grading))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CosetKind, CosetSide, GeneralizedCartanMatrix};
    use crate::hecke::{HeckeAlgebra, ParabolicModuleElement};
    use crate::laurent::LaurentPoly;

    fn a2() -> (Arc<WeylGroup>, Arc<KlBasis>) {
        let g = Arc::new(WeylGroup::from_cartan(GeneralizedCartanMatrix::a2()));
        let kl = Arc::new(KlBasis::new(Arc::new(HeckeAlgebra::new(g.clone()))));
        (g, kl)
    }

    fn el(g: &WeylGroup, word: &[usize]) -> WeylElement {
        g.from_word(word).unwrap()
    }

    fn finite_subsets(g: &WeylGroup) -> Vec<ParabolicSubset> {
        let n = g.rank();
        (0u32..1 << n)
            .map(|mask| g.parabolic(&(0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>()).unwrap())
            .filter(|t| t.finite_type())
            .collect()
    }

    #[test]
    fn push_standard_examples() {
        let (g, _) = a2();
        let theta = g.parabolic(&[0]).unwrap();
        let e = push_standard(&g, &g.identity(), &theta, Variance::Shriek).unwrap();
        assert_eq!(e.single(), Some((&g.identity(), Grading::default())));
        let p = push_standard(&g, &el(&g, &[0, 1]), &theta, Variance::Shriek).unwrap();
        assert_eq!(p.single(), Some((&el(&g, &[1]), Grading { shift: -1, twist_doubled: -1 })));
        let q = push_standard(&g, &el(&g, &[1]), &theta, Variance::Star).unwrap();
        assert_eq!(q.single(), Some((&el(&g, &[1]), Grading::default())));
    }

    #[test]
    fn average_standard_examples() {
        let (g, _) = a2();
        let theta = g.parabolic(&[0]).unwrap();
        let a = average_standard(&g, &el(&g, &[1, 0]), &theta).unwrap();
        assert_eq!(a.single(), Some((&el(&g, &[1, 0]), Grading::default())));
        let b = average_standard(&g, &el(&g, &[0]), &theta).unwrap();
        assert_eq!(b.single(), Some((&g.identity(), Grading { shift: 0, twist_doubled: 1 })));
        let c = average_standard(&g, &el(&g, &[0, 1]), &theta).unwrap();
        assert_eq!(c.single(), Some((&el(&g, &[1]), Grading { shift: 0, twist_doubled: 1 })));
        assert_eq!(c.single().unwrap().1.table(), BigradedDim::singleton(0, -1));
    }

    #[test]
    fn kill_examples() {
        let (g, _) = a2();
        let theta = g.parabolic(&[0]).unwrap();
        assert!(!kill_nonminimal(&g, &g.identity(), &theta));
        assert!(kill_nonminimal(&g, &el(&g, &[0]), &theta));
        assert!(!kill_nonminimal(&g, &el(&g, &[1, 0]), &theta));
    }

    #[test]
    fn non_finite_theta_is_rejected() {
        let g = WeylGroup::from_cartan(GeneralizedCartanMatrix::affine_a1());
        let theta = g.parabolic(&[0, 1]).unwrap();
        assert!(matches!(push_standard(&g, &g.identity(), &theta, Variance::Star), Err(Error::NotFiniteType(_))));
        assert!(matches!(average_standard(&g, &g.identity(), &theta), Err(Error::NotFiniteType(_))));
        assert!(matches!(projective_flag(&g, &theta), Err(Error::NotFiniteType(_))));
    }

    #[test]
    fn survivors_are_one_per_coset() {
        for cartan in [GeneralizedCartanMatrix::a2(), GeneralizedCartanMatrix::b2()] {
            let g = WeylGroup::from_cartan(cartan);
            let all = g.elements_up_to(10);
            for theta in finite_subsets(&g) {
                let survivors: Vec<_> = all.iter().filter(|w| !kill_nonminimal(&g, w, &theta)).cloned().collect();
                let reps = g.coset_representatives(&theta, CosetSide::Left, CosetKind::Minimal, 10).unwrap();
                assert_eq!(survivors, reps);
                // every element lies over exactly one survivor
                let mut over: BTreeMap<WeylElement, usize> = BTreeMap::new();
                for w in &all {
                    *over.entry(g.factor_parabolic(w, &theta).1).or_default() += 1;
                }
                assert_eq!(over.keys().cloned().collect::<Vec<_>>(), survivors);
                let size = g.parabolic_subgroup(&theta).unwrap().len();
                assert!(over.values().all(|&n| n == size));
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let (g, kl) = a2();
        let theta = g.parabolic(&[0]).unwrap();
        let e = parabolic_decomp_multiplicities(&kl, &g.identity(), &theta).unwrap();
        assert_eq!(e, vec![DecompTerm { coset: g.identity(), shift: 0, multiplicity: 1 }]);
        let s2 = parabolic_decomp_multiplicities(&kl, &el(&g, &[1]), &theta).unwrap();
        assert_eq!(s2, vec![DecompTerm { coset: el(&g, &[1]), shift: 0, multiplicity: 1 }]);
        // b_s acts on the spherical unit by v + v^-1
        let s1 = parabolic_decomp_multiplicities(&kl, &el(&g, &[0]), &theta).unwrap();
        assert_eq!(
            s1,
            vec![
                DecompTerm { coset: g.identity(), shift: -1, multiplicity: 1 },
                DecompTerm { coset: g.identity(), shift: 1, multiplicity: 1 },
            ]
        );
    }

    /// `N_e H_x` computed directly: with `x = u v`, `u` in `W_Theta` acts on
    /// the spherical unit by `v^-l(u)`.
    fn project_standard_oracle(g: &WeylGroup, theta: &ParabolicSubset, h: &crate::hecke::HeckeElement) -> BTreeMap<WeylElement, LaurentPoly> {
        let mut out: BTreeMap<WeylElement, LaurentPoly> = BTreeMap::new();
        for (x, p) in h.terms() {
            let (u, v) = g.factor_parabolic(x, theta);
            let c = p * &LaurentPoly::monomial(1, -(u.length() as i32));
            let slot = out.entry(v).or_default();
            *slot = &*slot + &c;
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    fn as_map(m: &ParabolicModuleElement) -> BTreeMap<WeylElement, LaurentPoly> {
        m.terms().map(|(x, p)| (x.clone(), p.clone())).collect()
    }

    #[test]
    fn multiplicities_reassemble_the_projection() {
        for cartan in [GeneralizedCartanMatrix::a2(), GeneralizedCartanMatrix::b2()] {
            let g = Arc::new(WeylGroup::from_cartan(cartan));
            let kl = Arc::new(KlBasis::new(Arc::new(HeckeAlgebra::new(g.clone()))));
            for theta in finite_subsets(&g) {
                let module = ParabolicModule::new(kl.clone(), theta.clone(), Flavor::Spherical);
                for w in g.elements_up_to(5) {
                    let terms = parabolic_decomp_multiplicities(&kl, &w, &theta).unwrap();
                    let mut sum = module.zero();
                    for t in &terms {
                        let n = module.kl_element(&t.coset).unwrap();
                        sum.add_scaled(&n, &LaurentPoly::monomial(t.multiplicity as i64, t.shift));
                    }
                    let expected = project_standard_oracle(&g, &theta, &kl.to_standard(&kl.b(&w)));
                    assert_eq!(as_map(&sum), expected, "w = {w}, theta = {:?}", theta.generators());
                }
            }
        }
    }

    #[test]
    fn pw_match_pairs_identical_data() {
        for cartan in [GeneralizedCartanMatrix::a2(), GeneralizedCartanMatrix::b2()] {
            let g = WeylGroup::from_cartan(cartan);
            for theta in finite_subsets(&g) {
                for x in g.coset_representatives(&theta, CosetSide::Left, CosetKind::Minimal, 5).unwrap() {
                    let (p, wh) = pw_match(&g, &x, &theta).unwrap();
                    assert_eq!(p.flavor, CharacterFlavor::Parabolic);
                    assert_eq!(wh.flavor, CharacterFlavor::Whittaker);
                    assert_eq!(p.support(), wh.support());
                    assert_eq!(p.single(), Some((&x, Grading::default())));
                }
            }
        }
        let (g, _) = a2();
        let theta = g.parabolic(&[0]).unwrap();
        assert!(matches!(pw_match(&g, &el(&g, &[0]), &theta), Err(Error::NotMinimal(_))));
    }

    #[test]
    fn projective_flag_lists_the_parabolic_subgroup_once() {
        let g = WeylGroup::from_cartan(GeneralizedCartanMatrix::b2());
        for theta in finite_subsets(&g) {
            let flag = projective_flag(&g, &theta).unwrap();
            // independent enumeration: elements whose reduced word only uses Theta
            let mut expected: Vec<(WeylElement, Grading)> = g
                .elements_up_to(8)
                .into_iter()
                .filter(|w| w.word().iter().all(|s| theta.contains(*s)))
                .map(|u| {
                    let l = u.length() as i32;
                    (u, Grading { shift: 0, twist_doubled: l })
                })
                .collect();
            let mut got = flag.clone();
            got.sort();
            expected.sort();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn character_json() {
        let (g, _) = a2();
        let theta = g.parabolic(&[0]).unwrap();
        let p = push_standard(&g, &el(&g, &[0, 1]), &theta, Variance::Shriek).unwrap();
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"theta":[0],"flavor":"parabolic","support":[{"coset":[1],"shift":-1,"twist_doubled":-1}]}"#
        );
    }
}
