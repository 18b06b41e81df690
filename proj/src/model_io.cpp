// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/model_io.hpp"

#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace obliv {
namespace {

using nlohmann::json;

template <typename Bits>
std::string to_hex(Bits bits) {
  constexpr int kDigits = static_cast<int>(sizeof(Bits) * 2);
  std::string out(kDigits, '0');
  for (int i = kDigits - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = "0123456789abcdef"[bits & 0xf];
    bits >>= 4;
  }
  return out;
}

std::string hex32(float v) { return to_hex(std::bit_cast<std::uint32_t>(v)); }
std::string hex64(double v) { return to_hex(std::bit_cast<std::uint64_t>(v)); }

template <typename Bits>
Bits parse_hex(const json& node, const std::string& path) {
  if (!node.is_string()) throw ParseError(path, "expected a hex string");
  const auto& text = node.get_ref<const std::string&>();
  constexpr std::size_t kDigits = sizeof(Bits) * 2;
  if (text.size() != kDigits) {
    throw ParseError(path, "expected " + std::to_string(kDigits) + " hex digits, got \"" +
                               text + "\"");
  }
  for (char c : text) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
      throw ParseError(path, "invalid lowercase hex \"" + text + "\"");
    }
  }
  Bits bits{};
  std::from_chars(text.data(), text.data() + text.size(), bits, 16);
  return bits;
}

const json& field(const json& object, const char* name, const std::string& path) {
  if (!object.is_object()) throw ParseError(path, "expected an object");
  const auto it = object.find(name);
  if (it == object.end()) {
    throw ParseError(path.empty() ? name : path + "." + name,
                     std::string("missing required field \"") + name + "\"");
  }
  return *it;
}

const json& array_field(const json& object, const char* name, const std::string& path) {
  const json& node = field(object, name, path);
  if (!node.is_array()) {
    throw ParseError(path.empty() ? name : path + "." + name, "expected an array");
  }
  return node;
}

std::uint64_t unsigned_field(const json& object, const char* name, const std::string& path) {
  const json& node = field(object, name, path);
  if (!node.is_number_unsigned()) {
    throw ParseError(path + "." + name, "expected a non-negative integer");
  }
  return node.get<std::uint64_t>();
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

template <typename T, typename F>
void write_list(std::ostream& out, const std::vector<T>& items, F&& write_item) {
  out << '[';
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out << ", ";
    write_item(items[i]);
  }
  out << ']';
}

}  // namespace

std::string serialize_model(const ObliviousModel& model) {
  require_valid(model);
  std::ostringstream out;
  out << "{\n  \"float_features\": [";
  for (std::size_t f = 0; f < model.float_features.size(); ++f) {
    const auto& feature = model.float_features[f];
    out << (f ? ",\n" : "\n") << "    {\"index\": " << feature.feature_index
        << ", \"borders_hex\": ";
    write_list(out, feature.borders, [&](float b) { out << '"' << hex32(b) << '"'; });
    out << '}';
  }
  out << "\n  ],\n  \"trees\": [";
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const auto& tree = model.trees[t];
    out << (t ? ",\n" : "\n") << "    {\"depth\": " << tree.depth << ", \"splits\": ";
    write_list(out, tree.splits, [&](const SplitCondition& s) {
      out << "{\"feature\": " << s.feature_index << ", \"border\": " << s.border_ordinal
          << '}';
    });
    out << ", \"leaves_hex\": ";
    write_list(out, tree.leaf_values, [&](double v) { out << '"' << hex64(v) << '"'; });
    out << '}';
  }
  out << (model.trees.empty() ? "],\n" : "\n  ],\n");
  out << "  \"scale_hex\": \"" << hex64(model.scale) << "\",\n";
  out << "  \"bias_hex\": \"" << hex64(model.bias) << "\"\n}\n";
  return out.str();
}

ObliviousModel deserialize_model(std::string_view document) {
  json root;
  try {
    root = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(line_column(document, e.byte), "malformed document");
  }
  if (!root.is_object()) throw ParseError("line 1, column 1", "document is not an object");

  ObliviousModel model;
  const json& features = array_field(root, "float_features", "");
  for (std::size_t f = 0; f < features.size(); ++f) {
    const std::string path = "float_features[" + std::to_string(f) + "]";
    FloatFeatureBorders feature;
    const std::uint64_t index = unsigned_field(features[f], "index", path);
    if (index > UINT32_MAX) throw ParseError(path + ".index", "index too large");
    feature.feature_index = static_cast<std::uint32_t>(index);
    const json& borders = array_field(features[f], "borders_hex", path);
    for (std::size_t k = 0; k < borders.size(); ++k) {
      const auto bits = parse_hex<std::uint32_t>(
          borders[k], path + ".borders_hex[" + std::to_string(k) + "]");
      feature.borders.push_back(std::bit_cast<float>(bits));
    }
    model.float_features.push_back(std::move(feature));
  }

  const json& trees = array_field(root, "trees", "");
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const std::string path = "trees[" + std::to_string(t) + "]";
    ObliviousTree tree;
    const std::uint64_t depth = unsigned_field(trees[t], "depth", path);
    if (depth > 64) throw ParseError(path + ".depth", "depth too large");
    tree.depth = static_cast<int>(depth);
    const json& splits = array_field(trees[t], "splits", path);
    for (std::size_t d = 0; d < splits.size(); ++d) {
      const std::string split_path = path + ".splits[" + std::to_string(d) + "]";
      const std::uint64_t feature = unsigned_field(splits[d], "feature", split_path);
      const std::uint64_t border = unsigned_field(splits[d], "border", split_path);
      if (feature > UINT32_MAX || border > UINT32_MAX) {
        throw ParseError(split_path, "split field too large");
      }
      tree.splits.push_back(
          {static_cast<std::uint32_t>(feature), static_cast<std::uint32_t>(border)});
    }
    const json& leaves = array_field(trees[t], "leaves_hex", path);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const auto bits = parse_hex<std::uint64_t>(
          leaves[i], path + ".leaves_hex[" + std::to_string(i) + "]");
      tree.leaf_values.push_back(std::bit_cast<double>(bits));
    }
    model.trees.push_back(std::move(tree));
  }

  model.scale =
      std::bit_cast<double>(parse_hex<std::uint64_t>(field(root, "scale_hex", ""), "scale_hex"));
  model.bias =
      std::bit_cast<double>(parse_hex<std::uint64_t>(field(root, "bias_hex", ""), "bias_hex"));

  require_valid(model);
  return model;
}

void save_model(const ObliviousModel& model, const std::filesystem::path& path) {
  const std::string text = serialize_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

ObliviousModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return deserialize_model(buffer.str());
}

}  // namespace obliv
