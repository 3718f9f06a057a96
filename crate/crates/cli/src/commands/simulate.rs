//! `lexdist simulate` — drive the name-evolution simulator from a flat
//! key-value config file; emit per-generation tables and summary fits.

use super::*;
use lexdist::corpus::{write_frequency_table, TableFormat};
use lexdist::dist::{rank_distribution, Entry};
use lexdist::fitting::{fit_geometric, fit_power_law};
use lexdist::generators::{simulate_name_evolution, EvolutionConfig};
use lexdist::rng::RNG_ALGORITHM;

#[derive(Debug, Clone)]
pub struct SimulateArgs {
    pub config: PathBuf,
}

pub fn run(args: &SimulateArgs, opts: &GlobalOpts) -> Result<String, CliError> {
    let mut builder = ReportBuilder::new(opts.invocation.clone());
    builder.add_input(&args.config)?;
    let text = std::fs::read_to_string(&args.config)?;
    let mut config = EvolutionConfig::from_config_text(&text)?;
    if let Some(seed) = opts.seed {
        config.seed = seed; // --seed overrides the config file
    }
    builder.set_rng(RNG_ALGORITHM, config.seed);

    let records = simulate_name_evolution(&config)?;

    let mut echo = Map::new();
    echo.insert("generations".to_owned(), config.generations.into());
    echo.insert(
        "births_per_generation".to_owned(),
        config.births_per_generation.into(),
    );
    echo.insert(
        "innovation_rate".to_owned(),
        float_value(config.innovation_rate),
    );
    echo.insert(
        "mortality_rate".to_owned(),
        float_value(config.mortality_rate),
    );
    echo.insert(
        "migration_rate".to_owned(),
        float_value(config.migration_rate),
    );
    echo.insert("n_founders".to_owned(), config.founders.len().into());
    echo.insert(
        "migrant_pool_size".to_owned(),
        config.migrant_pool.len().into(),
    );
    builder.insert("config", Value::Object(echo));

    let per_generation: Vec<Value> = records
        .iter()
        .map(|rec| {
            let mut m = Map::new();
            m.insert("generation".to_owned(), rec.generation.into());
            m.insert("population".to_owned(), rec.population.into());
            m.insert("n_types".to_owned(), rec.table.len().into());
            Value::Object(m)
        })
        .collect();
    builder.insert("per_generation", Value::Array(per_generation));

    let last = records.last().expect("at least the founder generation");
    let mut final_map = Map::new();
    final_map.insert("generation".to_owned(), last.generation.into());
    final_map.insert("population".to_owned(), last.population.into());
    final_map.insert("n_types".to_owned(), last.table.len().into());
    match rank_distribution(&last.table, 1, None, None) {
        Ok(ranked) => {
            let mut fits = Map::new();
            for (name, fit) in [
                ("geometric", fit_geometric(&ranked)),
                ("power_law", fit_power_law(&ranked)),
            ] {
                match fit {
                    Ok(fit) => {
                        fits.insert(name.to_owned(), fit_value(&fit));
                    }
                    Err(e) => {
                        fits.insert(name.to_owned(), Value::String(e.to_string()));
                    }
                }
            }
            final_map.insert("fits".to_owned(), Value::Object(fits));
        }
        Err(e) => {
            final_map.insert("fits".to_owned(), Value::String(e.to_string()));
        }
    }
    builder.insert("final", Value::Object(final_map));

    // per-generation tables plus one combined long-format table keyed by
    // generation in the period column
    if opts.out.is_some() {
        let mut combined: Vec<Entry> = Vec::new();
        for rec in &records {
            let mut bytes = Vec::new();
            write_frequency_table(&rec.table, &mut bytes, TableFormat::Csv)?;
            opts.write_aux(&format!("gen_{:04}.csv", rec.generation), &bytes)?;
            combined.extend(
                rec.table
                    .entries()
                    .iter()
                    .map(|e| Entry::new(e.token.clone(), e.count).with_period(rec.generation as i64)),
            );
        }
        let combined_table = FrequencyTable::aggregate(combined).0;
        let mut bytes = Vec::new();
        write_frequency_table(&combined_table, &mut bytes, TableFormat::Csv)?;
        opts.write_aux("generations.csv", &bytes)?;
    }
    opts.emit(&builder)
}
