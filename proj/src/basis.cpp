#include "hardy/basis.hpp"

#include <stdexcept>

namespace hardy {

char level_char(Level l) {
    switch (l) {
        case Level::g:
            return 'g';
        case Level::e:
            return 'e';
        case Level::f:
            return 'f';
    }
    return '?';
}

namespace {

Level level_from_char(char c) {
    switch (c) {
        case 'g':
            return Level::g;
        case 'e':
            return Level::e;
        case 'f':
            return Level::f;
        default:
            throw std::invalid_argument(std::string("unknown ion level '") + c + "'");
    }
}

}  // namespace

IonBasisIndex IonBasisIndex::from_index(std::size_t i) {
    if (i >= kInternalDim) {
        throw std::out_of_range("internal basis index " + std::to_string(i) + " out of range");
    }
    return {static_cast<Level>(i / kLevels), static_cast<Level>(i % kLevels)};
}

IonBasisIndex IonBasisIndex::parse(std::string_view label) {
    if (label.size() != 2) {
        throw std::invalid_argument("internal state label must have two characters, got '" +
                                    std::string(label) + "'");
    }
    return {level_from_char(label[0]), level_from_char(label[1])};
}

std::string IonBasisIndex::label() const { return {level_char(ion1), level_char(ion2)}; }

std::array<IonBasisIndex, kInternalDim> all_internal_states() {
    std::array<IonBasisIndex, kInternalDim> out{};
    for (std::size_t i = 0; i < kInternalDim; ++i) {
        out[i] = IonBasisIndex::from_index(i);
    }
    return out;
}

}  // namespace hardy
