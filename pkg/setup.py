from setuptools import setup, find_packages

setup(
    name='bquiver',
    version='0.1',
    description="""Quiver presentations of the descent algebras of type B:
      forests, B-orbits, the map Delta and verification of the relations.""",
    long_description=open('README.md', 'r').read(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=['tests']),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    install_requires=[
        'pandas>=2.0.3',
        'sympy>=1.12',
        'tqdm>=4.66'
    ],
    entry_points={
        'console_scripts': ['bquiver = bquiver.bquiver:main'],
    },
    python_requires='>=3.10',
)
