// Copyright 2026 The URDD Authors.
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace urdd {

enum class ErrorCode {
  // Input errors (parse / file system).
  kMalformedXml,
  kDuplicateName,
  kDanglingLinkReference,
  kKinematicLoop,
  kMultipleRoots,
  kMimicCycle,
  kInvalidMimic,
  kInvalidJoint,
  kInvalidGeometry,
  kMissingMeshFile,
  kInvertedLimits,
  kUnsupportedFormat,
  kCorruptMesh,
  kIoFailure,
  kPathEscape,
  kMissingManifest,
  kMissingModuleDirectory,
  kMalformedModule,
  kIncompatibleFormatVersion,
  kDigestMismatch,
  kUnknownAttachLink,
  kNameCollision,
  kIllegalJoint,
  kUnknownModule,
  // Derivation errors.
  kDegenerateGeometry,
  kMissingDependencyModule,
  kDimensionMismatch,
  kUnknownLink,
};

std::string_view to_string(ErrorCode code);

/// True for errors caused by bad input (files, XML, names) rather than by a
/// derivation step. The CLI maps these to exit status 1.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace urdd
