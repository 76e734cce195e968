//! Search ranking against a brute-force scorer on random corpora.

use histmap::search::{tokenize, SearchIndex};
use histmap_core::load_corpus;
use histmap_testkit::{fixture_dir, random_corpus, search_oracle, tokenize_oracle};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::SeedableRng;

#[test]
fn fixture_queries() {
    let corpus = load_corpus(&fixture_dir()).unwrap();
    let index = SearchIndex::build(&corpus);
    for q in [
        "wali demak",
        "Demak, DEMAK",
        "java",
        "battle",
        "",
        "no-such-word",
    ] {
        let got: Vec<_> = index
            .search(&corpus, q)
            .into_iter()
            .map(|h| (h.article_id, h.score))
            .collect();
        assert_eq!(got, search_oracle(&corpus, q), "{q}");
    }
    let top = index.search(&corpus, "wali demak");
    assert_eq!(top[0].article_id, "demak");
}

proptest! {
    #[test]
    fn tokenizer_matches_oracle(text in "\\PC{0,60}") {
        prop_assert_eq!(tokenize(&text), tokenize_oracle(&text));
    }

    #[test]
    fn random_corpora(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let corpus = random_corpus(&mut rng, 40);
        let index = SearchIndex::build(&corpus);
        let vocabulary: Vec<String> = corpus
            .articles()
            .iter()
            .flat_map(|a| tokenize(&format!("{} {}", a.title, a.body)))
            .chain(["absent".to_string()])
            .collect();
        for words in 1..4 {
            let q: Vec<&str> = (0..words)
                .map(|_| vocabulary.choose(&mut rng).unwrap().as_str())
                .collect();
            let q = q.join(" ").to_uppercase();
            let got: Vec<_> = index
                .search(&corpus, &q)
                .into_iter()
                .map(|h| (h.article_id, h.score))
                .collect();
            prop_assert_eq!(got, search_oracle(&corpus, &q));
        }
    }
}
