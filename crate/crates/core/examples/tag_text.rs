//! Prints each token with its part-of-speech class, one sentence per block.
//!
//! `cargo run --example tag_text -- story.txt`

use storyscope::attributes::tag_pos;
use storyscope::lexicon::Lexicons;
use storyscope::text::segment;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/kiss_of_ice.txt").to_string()
    });
    let document = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let mut tokens = segment(&document).tokens;
    tag_pos(&mut tokens, Lexicons::bundled());
    let mut sentence = 0;
    for t in &tokens {
        if t.sentence_index != sentence {
            if sentence != 0 {
                println!();
            }
            sentence = t.sentence_index;
        }
        println!("{}\t{}", t.text, t.pos.map_or("?", |p| p.as_str()));
    }
}
