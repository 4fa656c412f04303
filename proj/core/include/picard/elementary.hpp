#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace picard {

/// Registry of elementary functions understood by every evaluation backend.
enum class ElementaryFunction { Exp, Log, Sin, Cos, Tan, Tanh, Sech, Sqrt };

std::string_view function_name(ElementaryFunction f);
std::optional<ElementaryFunction> function_from_name(std::string_view name);
std::span<const ElementaryFunction> all_functions();

}  // namespace picard
