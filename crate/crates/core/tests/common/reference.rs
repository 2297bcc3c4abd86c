/// (dataset, target label, defense, ASR, ACC, printed OPS); source label 0.
/// The FedAvg row for each (dataset, target label) pair is the baseline of that pair.
pub const REFERENCE_ROWS: &[(&str, usize, &str, f64, f64, &str)] = &[
    ("MNIST", 5, "FedAvg", 1.0, 0.991, "0"),
    ("FMNIST", 5, "FedAvg", 0.990, 0.918, "0"),
    ("EMNIST", 5, "FedAvg", 0.999, 0.854, "0"),
    ("CIFAR-10", 5, "FedAvg", 0.973, 0.856, "0"),
    ("MNIST", 5, "Krum", 0.367, 0.990, "+0.632"),
    ("FMNIST", 5, "Krum", 0.992, 0.897, "-0.025"),
    ("EMNIST", 5, "Krum", 0.913, 0.842, "+0.072"),
    ("CIFAR-10", 5, "Krum", 0.851, 0.778, "+0.034"),
    ("MNIST", 5, "Median", 1.0, 0.991, "0"),
    ("FMNIST", 5, "Median", 0.991, 0.917, "-0.002"),
    ("EMNIST", 5, "Median", 0.977, 0.844, "+0.010"),
    ("CIFAR-10", 5, "Median", 0.973, 0.843, "-0.015"),
    ("MNIST", 5, "RLR", 0.0, 0.980, "+0.989"),
    ("FMNIST", 5, "RLR", 0.004, 0.874, "+0.948"),
    ("EMNIST", 5, "RLR", 0.013, 0.838, "+0.968"),
    ("CIFAR-10", 5, "RLR", 0.971, 0.839, "-0.018"),
    ("MNIST", 5, "FLTrust", 0.993, 0.985, "+0.001"),
    ("FMNIST", 5, "FLTrust", 0.512, 0.871, "+0.432"),
    ("EMNIST", 5, "FLTrust", 0.047, 0.762, "+0.845"),
    ("CIFAR-10", 5, "FLTrust", 0.915, 0.753, "-0.061"),
    ("MNIST", 5, "Pruning", 0.001, 0.991, "+0.999"),
    ("FMNIST", 5, "Pruning", 0.002, 0.906, "+0.985"),
    ("EMNIST", 5, "Pruning", 0.0, 0.854, "+1"),
    ("CIFAR-10", 5, "Pruning", 0.841, 0.850, "+0.129"),
    ("MNIST", 5, "M-metrics", 0.0, 0.991, "+1"),
    ("FMNIST", 5, "M-metrics", 0.986, 0.906, "-0.009"),
    ("EMNIST", 5, "M-metrics", 0.013, 0.817, "+0.944"),
    ("CIFAR-10", 5, "M-metrics", 0.942, 0.845, "+0.019"),
    ("MNIST", 5, "FLAIN", 0.0, 0.991, "+1"),
    ("FMNIST", 5, "FLAIN", 0.0, 0.908, "+0.989"),
    ("EMNIST", 5, "FLAIN", 0.0, 0.854, "+1"),
    ("CIFAR-10", 5, "FLAIN", 0.001, 0.851, "+0.993"),
    ("MNIST", 6, "FedAvg", 1.0, 0.992, "0"),
    ("FMNIST", 6, "FedAvg", 0.994, 0.919, "0"),
    ("EMNIST", 6, "FedAvg", 1.0, 0.853, "0"),
    ("CIFAR-10", 6, "FedAvg", 0.974, 0.843, "0"),
    ("MNIST", 6, "Krum", 0.709, 0.990, "+0.289"),
    ("FMNIST", 6, "Krum", 0.848, 0.898, "+0.124"),
    ("EMNIST", 6, "Krum", 0.946, 0.843, "+0.042"),
    ("CIFAR-10", 6, "Krum", 0.967, 0.757, "-0.095"),
    ("MNIST", 6, "Median", 1.0, 0.992, "0"),
    ("FMNIST", 6, "Median", 0.989, 0.902, "-0.013"),
    ("EMNIST", 6, "Median", 1.0, 0.851, "-0.002"),
    ("CIFAR-10", 6, "Median", 0.973, 0.832, "-0.012"),
    ("MNIST", 6, "RLR", 0.0, 0.978, "+0.986"),
    ("FMNIST", 6, "RLR", 0.108, 0.873, "+0.841"),
    ("EMNIST", 6, "RLR", 0.024, 0.834, "+0.954"),
    ("CIFAR-10", 6, "RLR", 0.964, 0.793, "-0.049"),
    ("MNIST", 6, "FLTrust", 1.0, 0.986, "-0.006"),
    ("FMNIST", 6, "FLTrust", 0.573, 0.881, "+0.382"),
    ("EMNIST", 6, "FLTrust", 0.179, 0.742, "+0.691"),
    ("CIFAR-10", 6, "FLTrust", 0.882, 0.736, "-0.032"),
    ("MNIST", 6, "Pruning", 0.002, 0.987, "+0.993"),
    ("FMNIST", 6, "Pruning", 0.544, 0.906, "+0.439"),
    ("EMNIST", 6, "Pruning", 0.003, 0.852, "+0.996"),
    ("CIFAR-10", 6, "Pruning", 0.145, 0.829, "+0.835"),
    ("MNIST", 6, "M-metrics", 0.003, 0.991, "+0.996"),
    ("FMNIST", 6, "M-metrics", 0.977, 0.908, "+0.005"),
    ("EMNIST", 6, "M-metrics", 0.996, 0.836, "-0.016"),
    ("CIFAR-10", 6, "M-metrics", 0.971, 0.845, "+0.005"),
    ("MNIST", 6, "FLAIN", 0.0, 0.991, "+0.999"),
    ("FMNIST", 6, "FLAIN", 0.006, 0.911, "+0.985"),
    ("EMNIST", 6, "FLAIN", 0.0, 0.852, "+0.999"),
    ("CIFAR-10", 6, "FLAIN", 0.0, 0.832, "+0.987"),
    ("MNIST", 7, "FedAvg", 1.0, 0.992, "0"),
    ("FMNIST", 7, "FedAvg", 0.992, 0.917, "0"),
    ("EMNIST", 7, "FedAvg", 0.999, 0.864, "0"),
    ("CIFAR-10", 7, "FedAvg", 0.971, 0.854, "0"),
    ("MNIST", 7, "Krum", 0.483, 0.990, "+0.515"),
    ("FMNIST", 7, "Krum", 0.989, 0.899, "-0.017"),
    ("EMNIST", 7, "Krum", 0.933, 0.843, "+0.042"),
    ("CIFAR-10", 7, "Krum", 0.932, 0.770, "-0.058"),
    ("MNIST", 7, "Median", 1.0, 0.991, "-0.001"),
    ("FMNIST", 7, "Median", 0.979, 0.896, "-0.010"),
    ("EMNIST", 7, "Median", 0.997, 0.847, "-0.018"),
    ("CIFAR-10", 7, "Median", 0.971, 0.824, "-0.035"),
    ("MNIST", 7, "RLR", 0.0, 0.983, "+0.991"),
    ("FMNIST", 7, "RLR", 0.003, 0.872, "+0.948"),
    ("EMNIST", 7, "RLR", 0.027, 0.835, "+0.939"),
    ("CIFAR-10", 7, "RLR", 0.637, 0.713, "+0.179"),
    ("MNIST", 7, "FLTrust", 1.0, 0.984, "-0.008"),
    ("FMNIST", 7, "FLTrust", 0.355, 0.875, "+0.596"),
    ("EMNIST", 7, "FLTrust", 0.824, 0.815, "+0.118"),
    ("CIFAR-10", 7, "FLTrust", 0.948, 0.723, "-0.130"),
    ("MNIST", 7, "Pruning", 0.0, 0.992, "+1"),
    ("FMNIST", 7, "Pruning", 0.038, 0.905, "+0.949"),
    ("EMNIST", 7, "Pruning", 0.0, 0.862, "+0.998"),
    ("CIFAR-10", 7, "Pruning", 0.653, 0.812, "+0.278"),
    ("MNIST", 7, "M-metrics", 0.0, 0.990, "+0.998"),
    ("FMNIST", 7, "M-metrics", 0.983, 0.908, "-0.001"),
    ("EMNIST", 7, "M-metrics", 0.034, 0.814, "+0.908"),
    ("CIFAR-10", 7, "M-metrics", 0.976, 0.841, "-0.020"),
    ("MNIST", 7, "FLAIN", 0.0, 0.987, "+0.995"),
    ("FMNIST", 7, "FLAIN", 0.0, 0.905, "+0.987"),
    ("EMNIST", 7, "FLAIN", 0.0, 0.863, "+0.999"),
    ("CIFAR-10", 7, "FLAIN", 0.003, 0.828, "+0.966"),
];
