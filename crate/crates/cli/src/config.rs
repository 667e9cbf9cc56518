//! `key=value` config files. Each entry becomes `--key value` unless the
//! command line already sets `--key`.

use std::path::Path;

fn flag_given(args: &[String], key: &str) -> bool {
    let long = format!("--{key}");
    args.iter().any(|a| *a == long || a.starts_with(&format!("{long}=")))
}

/// Path given through `--config PATH` or `--config=PATH`.
pub fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Appends config entries to `args`. `key=true` adds a bare switch,
/// `key=false` adds nothing.
pub fn merge(mut args: Vec<String>, text: &str) -> Result<Vec<String>, String> {
    let mut extra = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        if key.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        if key == "config" || flag_given(&args, &key) {
            continue;
        }
        match value {
            "true" => extra.push(format!("--{key}")),
            "false" => {}
            _ => {
                extra.push(format!("--{key}"));
                extra.push(value.to_string());
            }
        }
    }
    args.extend(extra);
    Ok(args)
}

pub fn read(path: &Path) -> std::io::Result<String> {
    std::fs::read_to_string(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn flags_win() {
        let args = merge(argv("fibdisp search --dim 2"), "dim = 3\nn_range=2..10\n# comment\njobs=2").unwrap();
        assert_eq!(args, argv("fibdisp search --dim 2 --n-range 2..10 --jobs 2"));
    }

    #[test]
    fn switches() {
        let args = merge(argv("fibdisp disp"), "periodic=true\ndrop-origin=false").unwrap();
        assert_eq!(args, argv("fibdisp disp --periodic"));
        assert!(merge(argv("x"), "novalue").is_err());
    }

    #[test]
    fn finds_path() {
        assert_eq!(config_path(&argv("a --config c.txt b")), Some("c.txt".into()));
        assert_eq!(config_path(&argv("a --config=c.txt")), Some("c.txt".into()));
        assert_eq!(config_path(&argv("a b")), None);
    }
}
