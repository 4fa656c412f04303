#include "picard/elementary.hpp"

#include <array>
#include <utility>

namespace picard {

namespace {

constexpr std::array<std::pair<ElementaryFunction, std::string_view>, 8> kRegistry{{
    {ElementaryFunction::Exp, "exp"},
    {ElementaryFunction::Log, "log"},
    {ElementaryFunction::Sin, "sin"},
    {ElementaryFunction::Cos, "cos"},
    {ElementaryFunction::Tan, "tan"},
    {ElementaryFunction::Tanh, "tanh"},
    {ElementaryFunction::Sech, "sech"},
    {ElementaryFunction::Sqrt, "sqrt"},
}};

constexpr std::array<ElementaryFunction, 8> kAll{
    ElementaryFunction::Exp, ElementaryFunction::Log,  ElementaryFunction::Sin,  ElementaryFunction::Cos,
    ElementaryFunction::Tan, ElementaryFunction::Tanh, ElementaryFunction::Sech, ElementaryFunction::Sqrt};

}  // namespace

std::string_view function_name(ElementaryFunction f) {
  for (const auto& [fn, name] : kRegistry)
    if (fn == f) return name;
  return "?";
}

std::optional<ElementaryFunction> function_from_name(std::string_view name) {
  for (const auto& [fn, n] : kRegistry)
    if (n == name) return fn;
  return std::nullopt;
}

std::span<const ElementaryFunction> all_functions() { return kAll; }

}  // namespace picard
