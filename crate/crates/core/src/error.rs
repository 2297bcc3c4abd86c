use std::path::PathBuf;

/// Broad failure class, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Data,
    Numeric,
    Io,
}

impl ErrorCategory {
    pub fn name(self) -> &'static str {
        match self {
            ErrorCategory::Config => "config",
            ErrorCategory::Data => "data",
            ErrorCategory::Numeric => "numeric",
            ErrorCategory::Io => "io",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            ErrorCategory::Config => 2,
            ErrorCategory::Data => 3,
            ErrorCategory::Numeric => 4,
            ErrorCategory::Io => 5,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch at layer {layer}: expected {expected}, got {got}")]
    LayerShape {
        layer: usize,
        expected: usize,
        got: usize,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("empty batch")]
    EmptyBatch,
    #[error("empty dataset")]
    EmptyDataset,
    #[error("label {label} out of range for {num_classes} classes")]
    LabelOutOfRange { label: usize, num_classes: usize },
    #[error("bad IDX magic: expected {expected:#010x}, found {found:#010x}")]
    BadMagic { expected: u32, found: u32 },
    #[error("truncated {what}: need {needed} bytes, have {available}")]
    Truncated {
        what: &'static str,
        needed: usize,
        available: usize,
    },
    #[error("count mismatch: {images} images but {labels} labels")]
    CountMismatch { images: usize, labels: usize },
    #[error("class {class} has {available} samples, {requested} requested")]
    InsufficientClass {
        class: usize,
        available: usize,
        requested: usize,
    },
    #[error("no samples with source label {0}")]
    NoSourceSamples(usize),
    #[error("trigger pixel ({row}, {col}) outside {rows}x{cols} grid")]
    TriggerOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("invalid trigger: {0}")]
    InvalidTrigger(String),
    #[error("neuron index {index} out of range for layer with {width} inputs")]
    NeuronOutOfRange { index: usize, width: usize },
    #[error("no client updates to aggregate")]
    NoUpdates,
    #[error("aggregator {rule} needs {needed} updates, got {got}")]
    TooFewUpdates {
        rule: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("OPS undefined: baseline ASR and ACC must be positive (asr={asr}, acc={acc})")]
    OpsUndefined { asr: f64, acc: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed row at line {line}: {message}")]
    MalformedRow { line: usize, message: String },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    ConfigParse {
        path: PathBuf,
        #[source]
        source: Box<toml::de::Error>,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            Config(_) | ConfigParse { .. } | InvalidTrigger(_) | TriggerOutOfBounds { .. } => {
                ErrorCategory::Config
            }
            LayerShape { .. } | Shape(_) | NonFinite(_) | OpsUndefined { .. } => {
                ErrorCategory::Numeric
            }
            Io { .. } => ErrorCategory::Io,
            _ => ErrorCategory::Data,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
