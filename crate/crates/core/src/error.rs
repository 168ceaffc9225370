use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("residue {residue} out of range for modulus {m}")]
    ResidueOutOfRange { residue: u64, m: u64 },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("modulus must be at least {min}, got {m}")]
    ModulusTooSmall { m: u64, min: u64 },
    #[error("modulus must be greater than {max}, got {m}")]
    ModulusTooLarge { m: u64, max: u64 },
    #[error("dilation {l} is not coprime with modulus {m}")]
    DilationNotUnit { l: u64, m: u64 },
    #[error("invalid cardinality range [{lo}, {hi}] for modulus {m}")]
    InvalidKRange { lo: u64, hi: u64, m: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error("representation cap ceiling {0} exhausted without a witness")]
    CeilingExhausted(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
