#pragma once

#include <span>
#include <string_view>

namespace plcomp::names {

/// Single-word person names, all distinct.
std::span<const std::string_view> people();
/// Single-word relation names, all distinct (at least 20).
std::span<const std::string_view> relations();
/// Item names for the math word problems.
std::span<const std::string_view> items();
/// Place names for the math word problems.
std::span<const std::string_view> places();

}  // namespace plcomp::names
