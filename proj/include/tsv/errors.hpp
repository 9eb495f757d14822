// Copyright 2026 The tsvsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TSV_ERRORS_HPP
#define TSV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tsv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define TSV_DEFINE_ERROR(Name)          \
    struct Name : Error {               \
        using Error::Error;             \
    }

TSV_DEFINE_ERROR(NotHermitian);
TSV_DEFINE_ERROR(NotUnitary);
TSV_DEFINE_ERROR(BadSubsystem);
TSV_DEFINE_ERROR(BadDimension);
TSV_DEFINE_ERROR(DimMismatch);
TSV_DEFINE_ERROR(NotNormalized);
// Pre/post pair assigns zero weight to every intermediate branch: the
// post-selected ensemble is empty and conditional probabilities are undefined.
TSV_DEFINE_ERROR(InconsistentSelection);
TSV_DEFINE_ERROR(EmptyEnsemble);
TSV_DEFINE_ERROR(BranchCapExceeded);
TSV_DEFINE_ERROR(GuardViolation);
TSV_DEFINE_ERROR(UnknownLabel);
TSV_DEFINE_ERROR(UnknownExperiment);
TSV_DEFINE_ERROR(SchemaError);

#undef TSV_DEFINE_ERROR

}  // namespace tsv

#endif  // TSV_ERRORS_HPP
