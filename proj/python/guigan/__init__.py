"""GUI subtree corpus, style embedding, sequence GAN, and evaluation toolkit."""

from ._guigan import (  # noqa: F401
    EvalReport,
    EvaluateOptions,
    GenerateOptions,
    GuiganError,
    SegmentationParams,
    SynthSpec,
    corpus_build,
    corpus_synth,
    evaluate_dirs,
    fid,
    gan_train,
    generate,
    homogeneity,
    med,
    one_nna,
    structure_loss,
    style_embed,
    style_loss_value,
    style_train,
)

__all__ = [
    "EvalReport",
    "EvaluateOptions",
    "GenerateOptions",
    "GuiganError",
    "SegmentationParams",
    "SynthSpec",
    "corpus_build",
    "corpus_synth",
    "evaluate_dirs",
    "fid",
    "gan_train",
    "generate",
    "homogeneity",
    "med",
    "one_nna",
    "structure_loss",
    "style_embed",
    "style_loss_value",
    "style_train",
]
