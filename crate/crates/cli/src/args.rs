//! `key=value` argument lists.

use std::path::Path;

use polyform::formulations::{Instance, Params, Problem};
use polyform::solvers::ProblemInstance;

use crate::commands::CliError;

/// Parsed `key=value` words: formulation parameters plus the per-instance
/// Steiner extras `terminals=` and (for `k-steiner`) the budget `t=`.
#[derive(Debug, Default)]
pub struct KeyValues {
    pub params: Vec<(String, usize)>,
    pub terminals: Option<Vec<usize>>,
    pub budget: Option<usize>,
}

pub fn is_key_value(word: &str) -> bool {
    word.split_once('=')
        .is_some_and(|(k, _)| !k.is_empty() && k.chars().all(|c| c.is_ascii_alphabetic()))
}

pub fn parse_key_values(problem: Option<Problem>, words: &[String]) -> Result<KeyValues, CliError> {
    let mut kv = KeyValues::default();
    for word in words {
        let (key, value) = word
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value, got `{word}`")))?;
        if key == "terminals" {
            let list = value
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse()
                        .map_err(|_| CliError::Usage(format!("bad terminal `{s}`")))
                })
                .collect::<Result<Vec<usize>, _>>()?;
            kv.terminals = Some(list);
            continue;
        }
        let value: usize = value.parse().map_err(|_| {
            CliError::Usage(format!(
                "`{key}` needs a nonnegative integer, got `{value}`"
            ))
        })?;
        if key == "t" && problem == Some(Problem::KSteinerTree) {
            kv.budget = Some(value);
        } else {
            kv.params.push((key.to_string(), value));
        }
    }
    Ok(kv)
}

/// Builds parameters from `kv`, with `--theta` winning over `theta=` and
/// `n` defaulting to `fallback_n` when absent. Theta defaults to 2.
pub fn build_params(
    kv: &KeyValues,
    theta: Option<usize>,
    fallback_n: Option<usize>,
) -> Result<Params, CliError> {
    let mut params = Params::new(0, 2);
    let mut saw_n = false;
    for (key, value) in &kv.params {
        saw_n |= key == "n";
        params.set(key, *value)?;
    }
    if !saw_n {
        params.n = fallback_n.ok_or_else(|| CliError::Usage("missing parameter n".into()))?;
    }
    if let Some(t) = theta {
        params.theta = t;
    }
    Ok(params)
}

pub fn parse_problem(tag: &str) -> Result<Problem, CliError> {
    tag.parse().map_err(|_| {
        let known: Vec<&str> = Problem::ALL.iter().map(|p| p.tag()).collect();
        CliError::Usage(format!(
            "unknown problem `{tag}` (one of {})",
            known.join(", ")
        ))
    })
}

/// The size an instance naturally fixes: nodes, variables or universe.
pub fn instance_size(x: &ProblemInstance) -> usize {
    match x {
        ProblemInstance::Graph(g) => g.n(),
        ProblemInstance::Cnf(f) => f.nvars,
        ProblemInstance::Family(f) => f.n,
        ProblemInstance::Hyper(h) => h.n,
    }
}

pub fn load_instance(path: &Path, kv: &KeyValues) -> Result<Instance, CliError> {
    let text = crate::commands::read(path)?;
    let data = polyform::solvers::parse_instance(&text).map_err(|e| CliError::in_file(path, e))?;
    let mut inst = Instance::new(data);
    if let Some(t) = &kv.terminals {
        inst = inst.with_terminals(t.clone());
    }
    if let Some(b) = kv.budget {
        inst = inst.with_budget(b);
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn steiner_budget_is_split_from_params() {
        let kv = parse_key_values(
            Some(Problem::KSteinerTree),
            &words("n=6 k=3 w=6 t=4 terminals=0,2,4"),
        )
        .unwrap();
        assert_eq!(kv.budget, Some(4));
        assert_eq!(kv.terminals, Some(vec![0, 2, 4]));
        assert_eq!(kv.params.len(), 3);
        let kv = parse_key_values(Some(Problem::IndependentSet), &words("n=5 t=2")).unwrap();
        assert_eq!(kv.budget, None);
        assert_eq!(kv.params.len(), 2);
    }

    #[test]
    fn theta_flag_and_default_n() {
        let kv = parse_key_values(None, &words("theta=3 k=2")).unwrap();
        let p = build_params(&kv, Some(4), Some(7)).unwrap();
        assert_eq!((p.n, p.theta, p.k), (7, 4, Some(2)));
        assert!(build_params(&kv, None, None).is_err());
        assert!(parse_key_values(None, &words("k=two")).is_err());
        assert!(is_key_value("n=4") && !is_key_value("graphs/a.txt") && !is_key_value("=3"));
    }
}
