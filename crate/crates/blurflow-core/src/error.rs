use thiserror::Error;

/// Errors produced by the blurflow library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("kernel exceeds image extent ({kernel}px kernel vs {width}x{height} image)")]
    KernelExceedsImage {
        kernel: usize,
        width: usize,
        height: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("motion channel parse error at line {line}: {message}")]
    MotionParse { line: usize, message: String },

    #[error("no consensus affine (inlier fraction {fraction:.3} below {required:.3})")]
    NoConsensusAffine { fraction: f64, required: f64 },

    #[error("no ground truth support (empty evaluation mask)")]
    EmptyMask,

    #[error("non-finite values in {0}")]
    NonFinite(String),

    #[error("flow file error: {0}")]
    FloFormat(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("image decode error: {0}")]
    ImageDecode(#[from] image::ImageError),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 for input problems, 3 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConsensusAffine { .. } | Error::NonFinite(_) | Error::EmptyMask => 3,
            _ => 2,
        }
    }
}
