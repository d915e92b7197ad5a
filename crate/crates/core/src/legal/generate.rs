use std::collections::HashSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::model::{Fragment, LegalDocument};
use super::taxonomy::TaxonomyFixture;
use crate::engine::normalize_space;

pub const FRAGMENT_TYPES: &[&str] = &["tenor", "tatbestand", "gruende", "leitsatz"];

const KEYWORD_WORDS: &[&str] = &[
    "Kündigung", "fristlos", "Mietvertrag", "Schadensersatz", "Arbeitsrecht", "Abmahnung", "Urlaub",
    "Betriebsrat", "Gewährleistung", "Mangel", "Rücktritt", "Verjährung", "Haftung", "Vertragsstrafe",
    "Unterhalt", "Sorgerecht", "Erbschaft", "Pflichtteil", "Testament", "Insolvenz", "Bürgschaft",
    "Darlehen", "Zinsen", "Kaufvertrag", "Werkvertrag", "Mieterhöhung", "Eigenbedarf", "Nebenkosten",
    "Kaution", "Räumung", "Baurecht", "Steuer", "Umsatzsteuer", "Datenschutz", "Wettbewerb",
    "Markenrecht", "Urheberrecht", "Versicherung", "Unfall", "Verkehrsrecht",
];

const CONTENT_WORDS: &[&str] = &[
    "Die", "Klage", "ist", "zulässig", "und", "begründet", "der", "Beklagte", "wird", "verurteilt",
    "an", "den", "Kläger", "zu", "zahlen", "Berufung", "zurückgewiesen", "Kosten", "des", "Verfahrens",
    "trägt", "Revision", "nicht", "zugelassen", "Gründe", "Tatbestand", "Parteien", "streiten", "über",
    "Wirksamkeit", "einer", "ordentlichen", "Kündigung", "Mietverhältnis", "Wohnung", "gemäß",
    "vorliegend", "Anspruch", "Schadensersatz", "Vermieter", "Mieter", "Frist", "Abs.", "Nr.",
    "hinsichtlich", "insoweit", "Gericht", "Landgericht", "Oberlandesgericht", "&", "GmbH", "Co.",
    "KG", "vom", "Urteil", "Beschluss", "Ärger", "Straße", "Größe", "übrigen",
];

const SPACES: &[&str] = &[" ", " ", " ", " ", "  ", "\n      ", "\t", " \n  ", "   "];

const LAWS: &[&str] = &["BGB", "ZPO", "StGB", "HGB", "GG", "KSchG", "BetrVG"];

/// File name used for a document when a corpus is written to disk.
pub fn corpus_file_name(doc: &LegalDocument) -> String {
    format!("doc-{}.xml", doc.id)
}

/// `n_docs` documents, each drawn from its own ChaCha stream so any
/// document can be regenerated alone.
pub fn generate_corpus(seed: u64, n_docs: usize, taxonomy: &TaxonomyFixture) -> Vec<LegalDocument> {
    (0..n_docs)
        .into_par_iter()
        .map(|i| generate_document(seed, i, taxonomy))
        .collect()
}

pub fn generate_document(seed: u64, index: usize, taxonomy: &TaxonomyFixture) -> LegalDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let id = format!("d{:06}", index + 1);
    let doc_keywords = keywords(&mut rng, 1, 8);
    let doc_concepts = concepts(&mut rng, taxonomy, 5);
    let n_fragments = rng.random_range(1..=12);
    let fragments = (1..=n_fragments)
        .map(|f| Fragment {
            id: format!("f{f}"),
            type_code: FRAGMENT_TYPES.choose(&mut rng).unwrap().to_string(),
            keywords: keywords(&mut rng, 0, 3),
            concepts: concepts(&mut rng, taxonomy, 3),
            content: content(&mut rng),
        })
        .collect();
    LegalDocument {
        id,
        keywords: doc_keywords,
        concepts: doc_concepts,
        fragments,
    }
}

fn space(rng: &mut ChaCha8Rng) -> &'static str {
    SPACES.choose(rng).unwrap()
}

/// Keyword phrases with irregular whitespace, distinct once normalized.
fn keywords(rng: &mut ChaCha8Rng, min: usize, max: usize) -> Vec<String> {
    let n = rng.random_range(min..=max);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let words = rng.random_range(1..=3);
        let mut k = String::new();
        if rng.random_bool(0.3) {
            k.push_str(space(rng));
        }
        for w in 0..words {
            if w > 0 {
                k.push_str(space(rng));
            }
            k.push_str(KEYWORD_WORDS.choose(rng).unwrap());
        }
        if rng.random_bool(0.3) {
            k.push_str(space(rng));
        }
        if seen.insert(normalize_space(&k)) {
            out.push(k);
        }
    }
    out
}

fn concepts(rng: &mut ChaCha8Rng, taxonomy: &TaxonomyFixture, max: usize) -> Vec<String> {
    let n = rng.random_range(0..=max).min(taxonomy.concepts.len());
    taxonomy.concepts.choose_multiple(rng, n).cloned().collect()
}

struct Content {
    xml: String,
    /// Length of the string value in characters.
    chars: usize,
}

impl Content {
    fn text(&mut self, s: &str) {
        for c in s.chars() {
            match c {
                '&' => self.xml.push_str("&amp;"),
                '<' => self.xml.push_str("&lt;"),
                c => self.xml.push(c),
            }
        }
        self.chars += s.chars().count();
    }

    fn reference(&mut self, rng: &mut ChaCha8Rng) {
        let law = LAWS.choose(rng).unwrap();
        let section = rng.random_range(1..=999);
        self.xml.push_str(&format!("<ref target=\"{law}-{section}\">"));
        self.text(&format!("§ {section} {law}"));
        self.xml.push_str("</ref>");
    }
}

/// Mixed content of 50 to 2000 characters of string value. One loop
/// iteration adds at most 40 characters, so a target of at most 1960
/// stays in range.
fn content(rng: &mut ChaCha8Rng) -> String {
    let target = rng.random_range(50..=1960);
    let mut c = Content {
        xml: String::new(),
        chars: 0,
    };
    while c.chars < target {
        if c.chars > 0 {
            c.text(space(rng));
        }
        let word = CONTENT_WORDS.choose(rng).unwrap();
        match rng.random_range(0..100) {
            0..=7 => {
                c.xml.push_str("<em>");
                c.text(word);
                c.xml.push_str("</em>");
            }
            8..=11 => c.reference(rng),
            12..=13 => {
                c.xml.push_str("<em>");
                c.text(word);
                c.text(" ");
                c.reference(rng);
                c.xml.push_str("</em>");
            }
            _ => c.text(word),
        }
    }
    c.xml
}
