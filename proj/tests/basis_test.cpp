#include "hardy/basis.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace hardy;

TEST(IonBasisIndex, RoundTripsAllNineStates) {
    for (std::size_t i = 0; i < kInternalDim; ++i) {
        const auto b = IonBasisIndex::from_index(i);
        EXPECT_EQ(b.index(), i);
        EXPECT_EQ(IonBasisIndex::parse(b.label()), b);
    }
}

TEST(IonBasisIndex, IonOneIsMajor) {
    EXPECT_EQ(basis::gg.index(), 0u);
    EXPECT_EQ(basis::ge.index(), 1u);
    EXPECT_EQ(basis::gf.index(), 2u);
    EXPECT_EQ(basis::eg.index(), 3u);
    EXPECT_EQ(basis::ee.index(), 4u);
    EXPECT_EQ(basis::ff.index(), 8u);
    EXPECT_EQ(basis::fe.label(), "fe");
}

TEST(IonBasisIndex, LabelsAreDistinct) {
    std::set<std::string> labels;
    for (const auto b : all_internal_states()) labels.insert(b.label());
    EXPECT_EQ(labels.size(), kInternalDim);
}

TEST(IonBasisIndex, RejectsBadInput) {
    EXPECT_THROW(IonBasisIndex::from_index(9), std::out_of_range);
    EXPECT_THROW(IonBasisIndex::parse("gx"), std::invalid_argument);
    EXPECT_THROW(IonBasisIndex::parse("g"), std::invalid_argument);
    EXPECT_THROW(IonBasisIndex::parse("gge"), std::invalid_argument);
}
