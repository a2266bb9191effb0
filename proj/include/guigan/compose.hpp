#pragma once

#include "guigan/corpus.hpp"
#include "guigan/image.hpp"

namespace guigan {

// Stack the sequence's crops top to bottom, each scaled (nearest
// neighbor) to out_width preserving aspect ratio. Crops crossing
// out_height are bottom-clipped; leftover space is filled with the last
// crop's bottom-row mean color; optional 4 px red separators between
// crops. Throws UnknownToken / EmptySequence.
Image render_sequence(const TokenSequence& seq, const SubtreeRepository& repo, int out_width,
                      int out_height, bool separators = false);

}  // namespace guigan
