pub mod corpus;
pub mod exec;
pub mod harmonize;
pub mod hmm;
pub mod music;
pub mod ornament;
pub mod midi;
pub mod rock;
pub mod export;
pub mod model;
pub mod pipeline;
