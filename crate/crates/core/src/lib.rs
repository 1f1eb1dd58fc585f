//! Bidirectional English ↔ ASL building blocks.
//!
//! * [`nlp`] lowers English text to tense plus keyword lemmas.
//! * [`gloss`] turns keywords into a playable gloss sequence.
//! * [`lexicon`] maps glosses to sign video assets.
//! * [`recognizer`] classifies hand-landmark frames into sign phrases.

pub mod gloss;
pub mod lexicon;
pub mod nlp;
pub mod recognizer;
