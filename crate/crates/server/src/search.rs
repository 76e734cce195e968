//! Keyword search over article titles and bodies.
//!
//! Text is lowercased and split on runs of non-alphanumeric characters. A hit
//! scores 2 per title occurrence and 1 per body occurrence of each distinct
//! query token.

use std::collections::HashMap;

use histmap_core::Corpus;
use serde::Serialize;

const TITLE_WEIGHT: u64 = 2;
const BODY_WEIGHT: u64 = 1;

pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    #[serde(rename = "id")]
    pub article_id: String,
    pub score: u64,
    #[serde(skip)]
    pub title_matches: u64,
    #[serde(skip)]
    pub body_matches: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Posting {
    article: usize,
    title: u64,
    body: u64,
}

/// Inverted index from token to per-article occurrence counts.
#[derive(Debug, Default)]
pub struct SearchIndex {
    postings: HashMap<String, Vec<Posting>>,
}

impl SearchIndex {
    pub fn build(corpus: &Corpus) -> Self {
        let mut postings: HashMap<String, Vec<Posting>> = HashMap::new();
        for (i, article) in corpus.articles().iter().enumerate() {
            let mut counts: HashMap<String, Posting> = HashMap::new();
            for token in tokenize(&article.title) {
                counts.entry(token).or_default().title += 1;
            }
            for token in tokenize(&article.body) {
                counts.entry(token).or_default().body += 1;
            }
            for (token, mut posting) in counts {
                posting.article = i;
                postings.entry(token).or_default().push(posting);
            }
        }
        SearchIndex { postings }
    }

    /// Hits ordered by score descending, then id.
    pub fn search(&self, corpus: &Corpus, query: &str) -> Vec<SearchHit> {
        let mut terms = tokenize(query);
        terms.sort_unstable();
        terms.dedup();

        let mut totals: HashMap<usize, (u64, u64)> = HashMap::new();
        for term in &terms {
            for p in self.postings.get(term).into_iter().flatten() {
                let entry = totals.entry(p.article).or_default();
                entry.0 += p.title;
                entry.1 += p.body;
            }
        }
        let mut hits: Vec<SearchHit> = totals
            .into_iter()
            .map(|(i, (title, body))| SearchHit {
                article_id: corpus.articles()[i].id.clone(),
                score: TITLE_WEIGHT * title + BODY_WEIGHT * body,
                title_matches: title,
                body_matches: body,
            })
            .filter(|h| h.score > 0)
            .collect();
        hits.sort_by(|a, b| {
            b.score
                .cmp(&a.score)
                .then_with(|| a.article_id.cmp(&b.article_id))
        });
        hits
    }
}
