use super::{PosTag, TaggedToken, Tense, TenseCounts};

/// Counts verb tags per tense group and picks the largest group.
///
/// past = VBD + VBN, present = VBG + VBP + VBZ, future = MD. Ties resolve
/// future > past > present; no verbs at all gives [`Tense::None`].
pub fn detect_tense(tagged: &[TaggedToken]) -> (Tense, TenseCounts) {
    let counts = count_tags(tagged.iter().map(|t| t.tag));
    (pick(counts), counts)
}

pub(crate) fn count_tags(tags: impl IntoIterator<Item = PosTag>) -> TenseCounts {
    let mut counts = TenseCounts::default();
    for tag in tags {
        match tag {
            PosTag::VBD | PosTag::VBN => counts.past += 1,
            PosTag::VBG | PosTag::VBP | PosTag::VBZ => counts.present += 1,
            PosTag::MD => counts.future += 1,
            _ => {}
        }
    }
    counts
}

fn pick(c: TenseCounts) -> Tense {
    if c.future == 0 && c.past == 0 && c.present == 0 {
        Tense::None
    } else if c.future >= c.past && c.future >= c.present {
        Tense::Future
    } else if c.past >= c.present {
        Tense::Past
    } else {
        Tense::Present
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlp::Token;
    use proptest::prelude::*;

    fn tagged(tags: &[PosTag]) -> Vec<TaggedToken> {
        tags.iter()
            .enumerate()
            .map(|(index, &tag)| TaggedToken {
                token: Token {
                    surface: format!("w{index}"),
                    index,
                },
                tag,
                lemma: String::new(),
            })
            .collect()
    }

    fn counts(past: usize, present: usize, future: usize) -> TenseCounts {
        TenseCounts {
            past,
            present,
            future,
        }
    }

    #[test]
    fn examples() {
        use PosTag::*;
        assert_eq!(detect_tense(&tagged(&[PRP, MD, VB])), (Tense::Future, counts(0, 0, 1)));
        assert_eq!(detect_tense(&tagged(&[PRP, VBD])), (Tense::Past, counts(1, 0, 0)));
        assert_eq!(detect_tense(&tagged(&[DT, NN])), (Tense::None, counts(0, 0, 0)));
        assert_eq!(detect_tense(&[]), (Tense::None, counts(0, 0, 0)));
    }

    #[test]
    fn tie_breaks() {
        use PosTag::*;
        assert_eq!(detect_tense(&tagged(&[MD, VBD])).0, Tense::Future);
        assert_eq!(detect_tense(&tagged(&[MD, VBZ])).0, Tense::Future);
        assert_eq!(detect_tense(&tagged(&[VBN, VBG])).0, Tense::Past);
        assert_eq!(detect_tense(&tagged(&[MD, VBD, VBP])).0, Tense::Future);
        assert_eq!(detect_tense(&tagged(&[VBD, VBP, VBP])).0, Tense::Present);
    }

    proptest! {
        #[test]
        fn permutation_invariant(
            tags in proptest::collection::vec(proptest::sample::select(PosTag::ALL.to_vec()), 0..20),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut shuffled = tags.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let a = detect_tense(&tagged(&tags));
            let b = detect_tense(&tagged(&shuffled));
            prop_assert_eq!(a, b);
            let c = a.1;
            prop_assert!(c.past + c.present + c.future <= tags.len());
        }
    }
}
