//! Dataset ingestion: UCR flat files, synthetic shape families, and the name registry.

mod registry;
mod synth;
mod ucr;

pub use registry::{DatasetEntry, DatasetRegistry, PAPER_DATASETS};
pub use synth::{
    generate_control_chart, generate_synthetic, synthetic_control_standin, ShapeFamily, SynthSpec,
};
pub use ucr::{parse_ucr, parse_ucr_str, ucr_string, write_ucr};
