// Copyright 2026 The pedforce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PEDFORCE_PARAMS_HPP_
#define PEDFORCE_PARAMS_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "pedforce/error.hpp"

namespace pedforce
{

/// Ordered `key = value` pairs. Blank lines and `#` comments are skipped.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Throws pedforce::Error naming the line on malformed input or repeated keys.
KeyValues parse_key_values(std::istream & in);

double parse_double(std::string_view text, std::string_view what);
std::size_t parse_count(std::string_view text, std::string_view what);

/// Shortest text that parses back to the same double.
std::string format_double(double value);

/// One tunable of a parameter struct, addressable by its flat config key.
template <class T>
struct ParamField
{
  std::string_view name;
  std::variant<double T::*, std::size_t T::*> member;
  std::string_view help;
};

template <class T>
std::string format_field(const T & obj, const ParamField<T> & field)
{
  return std::visit(
    [&](auto ptr) -> std::string {
      if constexpr (std::is_same_v<decltype(ptr), double T::*>) {
        return format_double(obj.*ptr);
      } else {
        return std::to_string(obj.*ptr);
      }
    },
    field.member);
}

template <class T>
void assign_field(T & obj, const ParamField<T> & field, std::string_view text)
{
  std::visit(
    [&](auto ptr) {
      if constexpr (std::is_same_v<decltype(ptr), double T::*>) {
        obj.*ptr = parse_double(text, field.name);
      } else {
        obj.*ptr = parse_count(text, field.name);
      }
    },
    field.member);
}

/// Assigns `key` if it names one of `fields`; returns whether it did.
template <class T>
bool try_assign(T & obj, std::span<const ParamField<T>> fields, std::string_view key, std::string_view value)
{
  for (const auto & f : fields) {
    if (f.name == key) {
      assign_field(obj, f, value);
      return true;
    }
  }
  return false;
}

/// Applies every pair to `obj`; unknown keys are rejected.
template <class T>
void apply_key_values(T & obj, std::span<const ParamField<T>> fields, const KeyValues & kv)
{
  for (const auto & [key, value] : kv) {
    if (!try_assign(obj, fields, key, value)) {
      throw Error("unknown config key '" + key + "'");
    }
  }
}

}  // namespace pedforce

#endif  // PEDFORCE_PARAMS_HPP_
