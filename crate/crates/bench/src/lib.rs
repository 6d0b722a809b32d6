//! Fixtures shared by the criterion benches.

use osax::{generate_synthetic, Dataset, ExperimentConfig, ShapeFamily, SymbolicWord, SynthSpec};

pub fn control_chart(count: usize, length: usize, seed: u64) -> Dataset {
    generate_synthetic(&SynthSpec {
        name: "bench".into(),
        families: ShapeFamily::ALL.to_vec(),
        count,
        length,
        noise: 0.6,
        variation: 0.6,
        seed,
    })
    .expect("valid bench spec")
}

pub fn random_words(
    count: usize,
    len: usize,
    alphabet: u32,
    source_length: usize,
) -> Vec<SymbolicWord> {
    // xorshift keeps the fixture free of an rng dependency
    let mut state = 0x2545_F491_4F6C_DD1Du64;
    (0..count)
        .map(|_| {
            let symbols = (0..len)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state % alphabet as u64) as u32
                })
                .collect();
            SymbolicWord::new(symbols, source_length).expect("valid word")
        })
        .collect()
}

/// Paper-default DE settings with a reduced generation budget.
pub fn short_config(generations: usize) -> ExperimentConfig {
    ExperimentConfig {
        one_step_generations: generations,
        two_step_generations: [generations / 2, generations - generations / 2],
        parallel: false,
        ..Default::default()
    }
}
