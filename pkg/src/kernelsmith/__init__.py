"""Semi-artificial tabular data from Gaussian-kernel classifiers.

Fit an RBF classifier whose units double as a generative mixture, sample
new rows from it, and quantify how close the synthetic data is to the
original with statistical, clustering, and classification workflows.
"""
from . import classeval, clustering, dataset, dda, fixtures, generator, mvn
from . import preprocess, sampler, stats
from ._accel import NUMBA_ENABLED
from .classeval import ClassEvalResult, ForestConfig, cross_performance, rf_predict, rf_train
from .clustering import Clustering, ari, choose_k, cross_compare, gower, pam
from .report import QualityReport
from .dataset import AttributeSpec, Dataset, load_csv, load_schema, stratified_split, write_csv
from .dda import RbfModel, RbfUnit, activation, classify, train
from .errors import KernelsmithError
from .generator import GeneratorSpec, Kernel, build
from .mvn import DiagonalGaussian, sample_gaussian, sample_std_normal
from .preprocess import EncodedDataset, TransformRecord, decode, encode, impute
from .sampler import SamplingConfig, allocate, equal_fraction, generate, silverman_width
from .stats import StatsSummary, compare, hellinger, ks_test, moments

__version__ = "0.1.0"

__all__ = [
    "AttributeSpec",
    "ClassEvalResult",
    "Clustering",
    "Dataset",
    "DiagonalGaussian",
    "EncodedDataset",
    "ForestConfig",
    "GeneratorSpec",
    "Kernel",
    "KernelsmithError",
    "NUMBA_ENABLED",
    "QualityReport",
    "RbfModel",
    "RbfUnit",
    "SamplingConfig",
    "StatsSummary",
    "TransformRecord",
    "activation",
    "allocate",
    "ari",
    "build",
    "choose_k",
    "classeval",
    "classify",
    "clustering",
    "compare",
    "cross_compare",
    "cross_performance",
    "dataset",
    "dda",
    "decode",
    "encode",
    "equal_fraction",
    "fixtures",
    "generate",
    "generator",
    "gower",
    "hellinger",
    "impute",
    "ks_test",
    "load_csv",
    "load_schema",
    "moments",
    "mvn",
    "pam",
    "preprocess",
    "rf_predict",
    "rf_train",
    "sample_gaussian",
    "sample_std_normal",
    "sampler",
    "silverman_width",
    "stats",
    "stratified_split",
    "train",
    "write_csv",
]
