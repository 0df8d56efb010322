#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace hardy {

// Internal levels of one ion. The numeric value is the position in the
// fixed per-ion basis order (g, e, f).
enum class Level : std::uint8_t { g = 0, e = 1, f = 2 };

inline constexpr std::size_t kLevels = 3;
inline constexpr std::size_t kInternalDim = kLevels * kLevels;

constexpr std::size_t level_index(Level l) { return static_cast<std::size_t>(l); }

char level_char(Level l);

// Product state |ion1 ion2> of the two system ions. Ion 1 is the major
// index: index = 3 * idx(ion1) + idx(ion2).
struct IonBasisIndex {
    Level ion1 = Level::g;
    Level ion2 = Level::g;

    constexpr std::size_t index() const { return kLevels * level_index(ion1) + level_index(ion2); }

    // Throws std::out_of_range for i >= 9.
    static IonBasisIndex from_index(std::size_t i);
    // Accepts two-character labels such as "gg" or "fe".
    static IonBasisIndex parse(std::string_view label);

    std::string label() const;

    friend constexpr bool operator==(IonBasisIndex, IonBasisIndex) = default;
};

namespace basis {
inline constexpr IonBasisIndex gg{Level::g, Level::g};
inline constexpr IonBasisIndex ge{Level::g, Level::e};
inline constexpr IonBasisIndex gf{Level::g, Level::f};
inline constexpr IonBasisIndex eg{Level::e, Level::g};
inline constexpr IonBasisIndex ee{Level::e, Level::e};
inline constexpr IonBasisIndex ef{Level::e, Level::f};
inline constexpr IonBasisIndex fg{Level::f, Level::g};
inline constexpr IonBasisIndex fe{Level::f, Level::e};
inline constexpr IonBasisIndex ff{Level::f, Level::f};
}  // namespace basis

// All nine internal basis states in index order.
std::array<IonBasisIndex, kInternalDim> all_internal_states();

}  // namespace hardy
