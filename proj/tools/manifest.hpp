/*
 *  Copyright 2026 The PVC Authors. All Rights Reserved.
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace pvc::cli {

/// Lowercase hex SHA-256 of a file's bytes. Throws InputError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

/// Record of one command invocation, written as manifest.json.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  nlohmann::ordered_json& parameters() { return params_; }
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  void error(std::string message) { errors_.push_back(std::move(message)); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Digests outputs, stamps the duration and writes `dir/manifest.json`.
  void write(const std::filesystem::path& dir) const;

 private:
  std::string command_;
  nlohmann::ordered_json params_ = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::filesystem::path> outputs_;
  std::vector<std::string> warnings_;
  std::vector<std::string> errors_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace pvc::cli
