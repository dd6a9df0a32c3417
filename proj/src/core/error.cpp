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

#include "urdd/error.hpp"

namespace urdd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedXml: return "MalformedXml";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kDanglingLinkReference: return "DanglingLinkReference";
    case ErrorCode::kKinematicLoop: return "KinematicLoop";
    case ErrorCode::kMultipleRoots: return "MultipleRoots";
    case ErrorCode::kMimicCycle: return "MimicCycle";
    case ErrorCode::kInvalidMimic: return "InvalidMimic";
    case ErrorCode::kInvalidJoint: return "InvalidJoint";
    case ErrorCode::kInvalidGeometry: return "InvalidGeometry";
    case ErrorCode::kMissingMeshFile: return "MissingMeshFile";
    case ErrorCode::kInvertedLimits: return "InvertedLimits";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptMesh: return "CorruptMesh";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kPathEscape: return "PathEscape";
    case ErrorCode::kMissingManifest: return "MissingManifest";
    case ErrorCode::kMissingModuleDirectory: return "MissingModuleDirectory";
    case ErrorCode::kMalformedModule: return "MalformedModule";
    case ErrorCode::kIncompatibleFormatVersion: return "IncompatibleFormatVersion";
    case ErrorCode::kDigestMismatch: return "DigestMismatch";
    case ErrorCode::kUnknownAttachLink: return "UnknownAttachLink";
    case ErrorCode::kNameCollision: return "NameCollision";
    case ErrorCode::kIllegalJoint: return "IllegalJoint";
    case ErrorCode::kUnknownModule: return "UnknownModule";
    case ErrorCode::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::kMissingDependencyModule: return "MissingDependencyModule";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnknownLink: return "UnknownLink";
  }
  return "UnknownError";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateGeometry:
    case ErrorCode::kMissingDependencyModule:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kUnknownLink:
      return false;
    default:
      return true;
  }
}

}  // namespace urdd
