from setuptools import setup, find_packages
from codecs import open
from os import path

__version__ = "0.1"

here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, "README.md"), encoding="utf-8") as f:
    long_description = f.read()

# get the dependencies and installs
with open(path.join(here, "requirements.txt"), encoding="utf-8") as f:
    all_reqs = f.read().split("\n")

install_requires = [x.strip() for x in all_reqs if x.strip()]

setup(
    name="pbmarl",
    version=__version__,
    description="Multi-agent reinforcement learning of cumulative ballots in participatory budgeting",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="MIT",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
    ],
    keywords="participatory budgeting, voting, equal shares, multi-agent reinforcement learning",
    packages=find_packages(exclude=["docs", "tests*", "examples*"]),
    include_package_data=True,
    python_requires=">=3.9",
    install_requires=install_requires,
    extras_require={
        "docs": ["mkdocs", "mkdocstrings[python]"],
        "test": ["pytest"],
    },
    entry_points={"console_scripts": ["pbmarl=pbmarl.cli:main"]},
)
