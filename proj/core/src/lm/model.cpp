#include "cegen/lm/model.hpp"

namespace cegen::lm {

EncState encode_inputs(const TokenSequence& inputs) {
    Hash128Builder h;
    for (TokenId id : inputs) h.u64(id);
    return EncState{h.finish(), inputs};
}

}  // namespace cegen::lm
