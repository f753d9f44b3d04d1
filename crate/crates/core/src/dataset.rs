use crate::error::{CoreError, Result};
use crate::generate::generate_instance;
use crate::instance::QapInstance;
use crate::matrix::Mat;
use qapforge_rng::SplitMix64;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// Name of the documented generator used for dataset files (see qapforge-rng).
pub const RNG_NAME: &str = "splitmix64";

/// Line-delimited text dataset. First line:
///
/// `qapds v1 seed=<u64> n=<int> count=<int> rng=<name>`
///
/// followed by `count` lines, one instance each: the instance size, then 2n
/// coordinates (x y per location), then the n(n-1)/2 upper-triangular flow
/// entries in row-major order. Floats are written with 17 significant digits,
/// which round-trips f64 exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetHeader {
    pub seed: u64,
    pub n: usize,
    pub count: usize,
    pub rng_name: String,
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn save_dataset(path: &Path, header: &DatasetHeader, instances: &[QapInstance]) -> Result<()> {
    if header.count == 0 {
        return Err(CoreError::InvalidInput("dataset count must be positive".into()));
    }
    if instances.len() != header.count {
        return Err(CoreError::InvalidInput(format!(
            "header count {} but {} instances given",
            header.count,
            instances.len()
        )));
    }
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "qapds v1 seed={} n={} count={} rng={}",
        header.seed, header.n, header.count, header.rng_name
    )?;
    for (idx, inst) in instances.iter().enumerate() {
        let n = inst.n();
        if n != header.n {
            return Err(CoreError::InvalidInput(format!(
                "instance {idx} has size {n} but header says {}",
                header.n
            )));
        }
        let mut fields = Vec::with_capacity(1 + 2 * n + n * (n - 1) / 2);
        fields.push(n.to_string());
        for c in inst.coords() {
            fields.push(fmt_f64(c[0]));
            fields.push(fmt_f64(c[1]));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                fields.push(fmt_f64(inst.flows()[(i, j)]));
            }
        }
        writeln!(w, "{}", fields.join(" "))?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_dataset(path: &Path) -> Result<(DatasetHeader, Vec<QapInstance>)> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines().enumerate();

    let (_, first) = lines
        .next()
        .ok_or_else(|| CoreError::Corrupt("empty file".into()))?;
    let header = parse_header(&first?)?;

    let mut instances = Vec::with_capacity(header.count);
    for _ in 0..header.count {
        let (line_idx, line) = lines.next().ok_or_else(|| {
            CoreError::Corrupt(format!(
                "header says count={} but file has only {} instance lines",
                header.count,
                instances.len()
            ))
        })?;
        let line_no = line_idx + 1;
        instances.push(parse_instance_line(&line?, line_no, header.n)?);
    }
    for (line_idx, line) in lines {
        if !line?.trim().is_empty() {
            return Err(CoreError::Corrupt(format!(
                "trailing content at line {} beyond header count {}",
                line_idx + 1,
                header.count
            )));
        }
    }
    Ok((header, instances))
}

fn parse_header(line: &str) -> Result<DatasetHeader> {
    let err = |msg: String| CoreError::Parse { line: 1, msg };
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != 6 || tokens[0] != "qapds" || tokens[1] != "v1" {
        return Err(err(format!("bad header line: {line:?}")));
    }
    let field = |tok: &str, key: &str| -> Result<String> {
        tok.strip_prefix(&format!("{key}="))
            .map(str::to_string)
            .ok_or_else(|| err(format!("expected {key}=..., got {tok:?}")))
    };
    let seed = field(tokens[2], "seed")?
        .parse::<u64>()
        .map_err(|e| err(format!("bad seed: {e}")))?;
    let n = field(tokens[3], "n")?
        .parse::<usize>()
        .map_err(|e| err(format!("bad n: {e}")))?;
    let count = field(tokens[4], "count")?
        .parse::<usize>()
        .map_err(|e| err(format!("bad count: {e}")))?;
    let rng_name = field(tokens[5], "rng")?;
    if n == 0 || count == 0 {
        return Err(err("n and count must be positive".into()));
    }
    Ok(DatasetHeader {
        seed,
        n,
        count,
        rng_name,
    })
}

fn parse_instance_line(line: &str, line_no: usize, expect_n: usize) -> Result<QapInstance> {
    let err = |msg: String| CoreError::Parse {
        line: line_no,
        msg,
    };
    let mut tokens = line.split_whitespace();
    let n: usize = tokens
        .next()
        .ok_or_else(|| err("empty instance line".into()))?
        .parse()
        .map_err(|e| err(format!("bad instance size: {e}")))?;
    if n != expect_n {
        return Err(err(format!("instance size {n} does not match header n={expect_n}")));
    }
    let mut floats = Vec::with_capacity(2 * n + n * (n - 1) / 2);
    for tok in tokens.by_ref() {
        floats.push(
            tok.parse::<f64>()
                .map_err(|e| err(format!("bad float {tok:?}: {e}")))?,
        );
    }
    let expected = 2 * n + n * (n - 1) / 2;
    if floats.len() != expected {
        return Err(err(format!(
            "expected {expected} values after the size, found {}",
            floats.len()
        )));
    }
    let coords: Vec<[f64; 2]> = floats[..2 * n]
        .chunks(2)
        .map(|c| [c[0], c[1]])
        .collect();
    let mut flows = Mat::zeros(n);
    let mut it = floats[2 * n..].iter();
    for i in 0..n {
        for j in (i + 1)..n {
            let f = *it.next().expect("length checked above");
            flows[(i, j)] = f;
            flows[(j, i)] = f;
        }
    }
    QapInstance::new(coords, flows)
}

/// Generate `count` instances of size `n` from a fresh stream seeded with
/// `seed`, together with the matching header. This is the single entry point
/// dataset files are produced through.
pub fn generate_dataset(seed: u64, n: usize, count: usize) -> Result<(DatasetHeader, Vec<QapInstance>)> {
    if count == 0 {
        return Err(CoreError::InvalidInput("dataset count must be positive".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut instances = Vec::with_capacity(count);
    for _ in 0..count {
        instances.push(generate_instance(&mut rng, n)?);
    }
    Ok((
        DatasetHeader {
            seed,
            n,
            count,
            rng_name: RNG_NAME.to_string(),
        },
        instances,
    ))
}
