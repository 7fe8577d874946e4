from pathlib import Path

from mten.classify import classify_m_tensor, sufficient_m_test
from mten.core import read_tensor

tensor = read_tensor(Path(__file__).with_name("Q.mten"))

verdict = classify_m_tensor(tensor)
print(f"{verdict}")
print(f"sufficient test: {sufficient_m_test(tensor).conclusion}")
