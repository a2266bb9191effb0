#pragma once

#include <stdexcept>
#include <string>

namespace guigan {

struct GuiganError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define GUIGAN_ERROR_TYPE(Name)                        \
  struct Name : GuiganError {                          \
    explicit Name(const std::string& msg)              \
        : GuiganError(std::string(#Name ": ") + msg) {} \
  }

GUIGAN_ERROR_TYPE(MalformedMetadata);
GUIGAN_ERROR_TYPE(ImageMismatch);
GUIGAN_ERROR_TYPE(EmptySegmentation);
GUIGAN_ERROR_TYPE(EmptyCorpus);
GUIGAN_ERROR_TYPE(InvalidSpec);
GUIGAN_ERROR_TYPE(ShapeMismatch);
GUIGAN_ERROR_TYPE(NonFiniteGradient);
GUIGAN_ERROR_TYPE(InsufficientCorpus);
GUIGAN_ERROR_TYPE(EmptyImage);
GUIGAN_ERROR_TYPE(Divergence);
GUIGAN_ERROR_TYPE(MissingEmbedding);
GUIGAN_ERROR_TYPE(LengthMismatch);
GUIGAN_ERROR_TYPE(EmptyBatch);
GUIGAN_ERROR_TYPE(NonFiniteLoss);
GUIGAN_ERROR_TYPE(DimensionMismatch);
GUIGAN_ERROR_TYPE(NonFiniteFeature);
GUIGAN_ERROR_TYPE(TooFewSamples);
GUIGAN_ERROR_TYPE(UnknownToken);
GUIGAN_ERROR_TYPE(EmptySequence);
GUIGAN_ERROR_TYPE(IoError);

#undef GUIGAN_ERROR_TYPE

}  // namespace guigan
