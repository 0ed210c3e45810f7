use rankdec::analysis::ParamSet;
use rankdec::channel::SeededRng;
use rankdec::ffield::{ExtElement, FieldTower};
use rankdec::instance::{Instance, InstanceFile};
use rankdec::randdec::{choose_delta, default_max_iter, randomized_decode, RandDecoderConfig};
use serde::Serialize;

use crate::args::{DecodeArgs, DeltaArg};
use crate::{emit, read_file, CliError, CliResult, EXIT_DECODE_FAILURE, EXIT_OK};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Decoded,
    Failure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecodeOutput {
    pub status: Status,
    pub w: usize,
    pub delta: usize,
    pub max_iter: u64,
    pub seed: u64,
    pub iterations_used: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codeword: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_rank: Option<usize>,
}

fn digits(tower: &FieldTower, v: &[ExtElement]) -> Vec<Vec<u32>> {
    v.iter().map(|&x| tower.coeffs(x)).collect()
}

pub fn decode_instance(
    inst: &Instance,
    w: usize,
    delta: DeltaArg,
    max_iter: Option<u64>,
    seed: u64,
) -> CliResult<DecodeOutput> {
    let code = &inst.code;
    let (n, k) = (code.n(), code.k());
    if w > n - k {
        return Err(CliError::Usage(format!("w = {w} exceeds n - k = {}", n - k)));
    }
    let tower = code.tower();
    let params = ParamSet::new(tower.q(), tower.m() as u32, n as u32, k as u32, w as u32)?;
    let delta = match delta {
        DeltaArg::Auto => choose_delta(params.n, params.k, params.m, params.w, params.q)?,
        DeltaArg::Fixed(d) => d,
    } as usize;
    let max_iter = max_iter.unwrap_or_else(|| default_max_iter(&params, delta as u32));
    let cfg = RandDecoderConfig::new(code, delta, max_iter, w)?;
    let rep = randomized_decode(code, &inst.r, &cfg, &mut SeededRng::new(seed, 0))?;
    log::debug!("decoder stopped after {} guesses", rep.iterations_used);
    let status = if rep.outcome.is_failure() { Status::Failure } else { Status::Decoded };
    Ok(DecodeOutput {
        status,
        w,
        delta,
        max_iter,
        seed,
        iterations_used: rep.iterations_used,
        message: rep.outcome.message().map(|m| digits(tower, m)),
        codeword: rep.outcome.codeword().map(|c| digits(tower, c)),
        residual_rank: rep.outcome.residual_rank(),
    })
}

pub fn cmd_decode(a: &DecodeArgs) -> CliResult<i32> {
    let inst = InstanceFile::parse(&read_file(&a.instance)?)?.into_instance()?;
    let w = a.w.map_or(inst.w, |w| w as usize);
    let out = decode_instance(&inst, w, a.delta, a.max_iter, a.seed)?;
    emit(
        &(serde_json::to_string_pretty(&out).expect("output serializes") + "\n"),
        None,
    )?;
    Ok(match out.status {
        Status::Decoded => EXIT_OK,
        Status::Failure => EXIT_DECODE_FAILURE,
    })
}
